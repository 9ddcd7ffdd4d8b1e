//! Parse a forest, walk its nodes, and inspect heavy paths.

use forest_ted::forest::{classify_node, parse_forest, Alphabet, HeavyInfo};

fn main() {
    let mut alpha = Alphabet::new();
    let f = parse_forest("(html (head (title)) (body (p) (div (p) (p))))", &mut alpha).unwrap();
    println!("{} characters: {}", f.len(), f.to_text(&alpha));

    let heavy = HeavyInfo::new(&f);
    for o in (0..f.len()).filter(|&i| f.is_open(i)) {
        let u = f.node(o);
        let depth = f.excess(o);
        println!(
            "{:indent$}{} [{}..{}] size {} heavy child {:?} light depth {}",
            "",
            alpha.name(f.label(o)),
            u.o,
            u.c,
            u.size(),
            heavy.heavy_child(o),
            heavy.light_depth(o),
            indent = 2 * depth as usize
        );
    }

    let (l, r) = (3, 12);
    println!("fragment [{l}..{r}) balanced: {}", f.is_balanced(l, r));
    for o in (0..f.len()).filter(|&i| f.is_open(i)) {
        println!("  {} is {:?}", alpha.name(f.label(o)), classify_node(f.node(o), l, r));
    }
}
