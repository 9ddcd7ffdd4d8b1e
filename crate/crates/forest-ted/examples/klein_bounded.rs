//! Bounded tree edit distance with an optimal edit script.

use forest_ted::forest::{parse_forest, Alphabet};
use forest_ted::klein::{bounded_klein, edit_script, klein_dp, klein_store, trace_alignment, Band};
use forest_ted::weights::CostModel;

fn main() {
    let mut alpha = Alphabet::new();
    let f = parse_forest("(a(b(c)(d))(e)(f(g)))", &mut alpha).unwrap();
    let g = parse_forest("(a(b(c))(e(x))(f(g)(h)))", &mut alpha).unwrap();
    let model = CostModel::unit(alpha.len());

    println!("ted = {}", klein_dp(&f, &g, &model).unwrap());
    for k in 1..=4 {
        println!("ted_<={k} = {}", bounded_klein(&f, &g, &model, k));
    }

    let st = klein_store(&f, &g, &model, Band::K(3), true).unwrap();
    let path = trace_alignment(&st, &f, &g).unwrap();
    for line in edit_script(&path, &f, &g) {
        println!("  {line}");
    }
}
