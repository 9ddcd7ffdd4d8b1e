//! Skip a long repeated region with a declared free block.

use std::time::Instant;

use forest_ted::forest::{parse_forest, Alphabet, Forest};
use forest_ted::freeopt::{optimized_ted, FreeBlock};
use forest_ted::klein::bounded_klein;
use forest_ted::weights::CostModel;

fn main() {
    let k = 2;
    let e = 2000;
    let mut alpha = Alphabet::new();
    // |R| = 8 lies in [4k..8k)
    let r = parse_forest("(a(b)(c))(d)", &mut alpha).unwrap();
    let mut repeated = |head: &str, tail: &str| {
        let mut s = head.to_string();
        s.push_str(&"(a(b)(c))(d)".repeat(e + 2));
        s.push_str(tail);
        parse_forest(&s, &mut alpha).unwrap()
    };
    let f = repeated("(x(y))", "(z)");
    let g = repeated("(x)", "(z(w))");
    let model = CostModel::unit(alpha.len());

    let block = FreeBlock {
        p_f: 4 + r.len(),
        q_f: 4 + r.len() * (e + 1),
        p_g: 2 + r.len(),
        q_g: 2 + r.len() * (e + 1),
        period: Forest::clone(&r),
        e,
    };

    let t = Instant::now();
    let fast = optimized_ted(&f, &g, &model, k, &[block]).unwrap();
    let t_fast = t.elapsed();
    let t = Instant::now();
    let slow = bounded_klein(&f, &g, &model, k);
    let t_slow = t.elapsed();
    println!("|F| = {}, |G| = {}", f.len(), g.len());
    println!("with block: {fast} in {t_fast:?}");
    println!("plain:      {slow} in {t_slow:?}");
}
