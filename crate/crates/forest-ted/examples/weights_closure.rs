//! Load a weight file, check it, and take its metric closure.

use forest_ted::driver::prepare_weights;
use forest_ted::forest::{parse_forest, Alphabet};
use forest_ted::oracle::oracle_ted;
use forest_ted::weights::WeightTable;

const WEIGHTS: &str = "\
# renaming a div to a section is cheap, deleting a paragraph is not
div\tsection\t1/2
p\t-\t3
-\tp\t3
p\tli\t4
";

fn main() {
    let mut alpha = Alphabet::new();
    let f = parse_forest("(div(p)(p))", &mut alpha).unwrap();
    let g = parse_forest("(section(p)(li))", &mut alpha).unwrap();
    let table = WeightTable::parse_tsv(WEIGHTS, &mut alpha).unwrap();

    // 1/2 is below the unit floor, so this table is rejected
    match prepare_weights(&table, &alpha) {
        Ok(_) => println!("accepted"),
        Err(e) => println!("rejected: {e}"),
    }

    let mut fixed = table.clone();
    fixed.set(alpha.get("div"), alpha.get("section"), "1".parse().unwrap());
    let closed = fixed.metric_closure();
    println!(
        "closure changed {} entries, w(p, li) = {} -> {}",
        closed.diff_count(&fixed),
        fixed.get(alpha.get("p"), alpha.get("li")),
        closed.get(alpha.get("p"), alpha.get("li"))
    );
    let prepared = prepare_weights(&fixed, &alpha).unwrap();
    println!("ted = {}", oracle_ted(&f, &g, &prepared.model));
}
