//! Exact distance by threshold doubling, on growing inputs.

use forest_ted::driver::{first_threshold, ted_auto};
use forest_ted::forest::{parse_forest, Alphabet};
use forest_ted::weights::CostModel;

fn main() {
    let mut alpha = Alphabet::new();
    for n in [4, 40, 400] {
        let f = parse_forest(&"(r(a(b)(c))(d))".repeat(n), &mut alpha).unwrap();
        let g_text = format!("(x){}(r(a(c))(d(e)))", "(r(a(b)(c))(d))".repeat(n - 1));
        let g = parse_forest(&g_text, &mut alpha).unwrap();
        let model = CostModel::unit(alpha.len());
        let run = ted_auto(&f, &g, &model);
        println!(
            "|F| + |G| = {:>5}: ted = {}, d_0 = {}, thresholds {:?}",
            f.len() + g.len(),
            run.value,
            first_threshold(f.len() + g.len()),
            run.thresholds
        );
    }
}
