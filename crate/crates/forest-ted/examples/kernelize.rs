//! Kernelize a large pair with a few planted edits and compare distances.

use forest_ted::forest::{parse_forest, Alphabet};
use forest_ted::freeopt::optimized_ted_or_fallback;
use forest_ted::kernel::kernelize;
use forest_ted::klein::bounded_klein;
use forest_ted::weights::CostModel;

fn main() {
    let k = 3;
    let mut alpha = Alphabet::new();
    let item = "(li(a)(span))";
    let list = |n: usize| format!("(ul{})", item.repeat(n));
    let f_text = format!("(html(head(title))(body{}(p(b)(i)){}))", list(300), list(40));
    let g_text = format!("(html(head)(body{}(p(b)){}(p)))", list(300), list(40));
    let f = parse_forest(&f_text, &mut alpha).unwrap();
    let g = parse_forest(&g_text, &mut alpha).unwrap();
    let model = CostModel::unit(alpha.len());

    let ker = kernelize(&f, &g, k, 0).unwrap();
    print!("{}", ker.dump());
    let (v, err) = optimized_ted_or_fallback(&ker.f, &ker.g, &model, k, &ker.blocks);
    assert!(err.is_none());
    println!("ted_<={k} on the kernel: {v}");
    println!("ted_<={k} on the input:  {}", bounded_klein(&f, &g, &model, k));
}
