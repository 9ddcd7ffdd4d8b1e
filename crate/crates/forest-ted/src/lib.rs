//! Weighted tree edit distance on forests written as balanced parenthesis strings.
//!
//! - [`forest`]: parsing, navigation, fingerprints, heavy paths.
//! - [`weights`]: weight tables, normalization checks, metric closure, integer cost units.
//! - [`oracle`]: memoized fragment DP and alignment enumeration, for testing.
//! - [`klein`]: Klein's DP, its `2k`-banded form, edit scripts, threshold doubling.
//! - [`freeopt`]: free blocks `R^e` skipped with min-plus powers of period matrices.
//! - [`kernel`]: size reduction of `(F, G)` that keeps `ted_{<=k}` and emits free blocks.
//! - [`driver`]: algorithm selection and the exact-distance driver.
//!
//! ```
//! use forest_ted::forest::{parse_forest, Alphabet};
//! use forest_ted::driver::{ted_auto, ted_bounded};
//! use forest_ted::weights::CostModel;
//!
//! let mut alpha = Alphabet::new();
//! let f = parse_forest("(a(b)(c))", &mut alpha).unwrap();
//! let g = parse_forest("(a(c(d)))", &mut alpha).unwrap();
//! let model = CostModel::unit(alpha.len());
//! assert_eq!(ted_auto(&f, &g, &model).value.to_string(), "2");
//! assert_eq!(ted_bounded(&f, &g, &model, 1).to_string(), "INF");
//! ```

pub mod cost;
pub mod forest;
pub mod weights;
pub mod oracle;
pub mod klein;
pub mod freeopt;
pub mod kernel;
pub mod driver;
