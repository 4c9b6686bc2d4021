//! String-addressable built-in spaces.
//!
//! | id                  | space                                   |
//! |---------------------|-----------------------------------------|
//! | `real`              | ℝ with `|·|`                            |
//! | `interval:<lo>:<hi>`| ℝ with `|·|`, ε-nets inside `[lo, hi]`  |
//! | `euclidean:<d>`     | ℝ^d with ℓ₂                             |
//! | `l1:<d>`            | ℝ^d with ℓ₁                             |
//! | `four_point`        | `{a, b, c, o}`                          |
//! | `singleton`         | one point `x`                           |
//! | `discrete:<a,b,..>` | discrete metric on the listed names     |
//! | `csv:<path>`        | loss matrix read from a CSV file        |

use super::{Euclidean, FiniteSpace, Norm, Space};
use crate::error::{Error, Result};

pub const BUILTIN_IDS: &str =
    "real, interval:<lo>:<hi>, euclidean:<d>, l1:<d>, four_point, singleton, discrete:<names>, csv:<path>";

#[derive(Clone, Debug)]
pub enum RegisteredSpace {
    Euclidean(Euclidean),
    Finite(FiniteSpace),
}

impl RegisteredSpace {
    pub fn id(&self) -> &str {
        match self {
            RegisteredSpace::Euclidean(s) => s.id(),
            RegisteredSpace::Finite(s) => s.id(),
        }
    }
}

pub fn resolve(id: &str) -> Result<RegisteredSpace> {
    let unknown = || Error::UnknownId { id: id.to_string(), valid: BUILTIN_IDS.to_string() };
    let dim = |s: &str| -> Result<usize> {
        s.parse::<usize>().ok().filter(|d| *d >= 1).ok_or_else(unknown)
    };
    let space = match id.split_once(':') {
        None => match id {
            "real" => RegisteredSpace::Euclidean(Euclidean::real()),
            "four_point" => RegisteredSpace::Finite(FiniteSpace::four_point()),
            "singleton" => RegisteredSpace::Finite(FiniteSpace::singleton()),
            _ => return Err(unknown()),
        },
        Some(("euclidean", d)) => RegisteredSpace::Euclidean(Euclidean::new(dim(d)?, Norm::L2)),
        Some(("interval", bounds)) => {
            let (lo, hi) = bounds.split_once(':').ok_or_else(unknown)?;
            let lo: f64 = lo.parse().map_err(|_| unknown())?;
            let hi: f64 = hi.parse().map_err(|_| unknown())?;
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(unknown());
            }
            RegisteredSpace::Euclidean(Euclidean::interval(lo, hi))
        }
        Some(("l1", d)) => RegisteredSpace::Euclidean(Euclidean::new(dim(d)?, Norm::L1)),
        Some(("discrete", names)) => {
            let names: Vec<&str> = names.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            RegisteredSpace::Finite(FiniteSpace::discrete(&names)?)
        }
        Some(("csv", path)) => RegisteredSpace::Finite(FiniteSpace::load_csv(path)?),
        _ => return Err(unknown()),
    };
    Ok(space)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_builtins() {
        assert_eq!(resolve("real").unwrap().id(), "real");
        assert_eq!(resolve("euclidean:3").unwrap().id(), "euclidean:3");
        assert_eq!(resolve("l1:2").unwrap().id(), "l1:2");
        assert_eq!(resolve("euclidean:1").unwrap().id(), "real");
        assert_eq!(resolve("four_point").unwrap().id(), "four_point");
        assert_eq!(resolve("discrete:p,q").unwrap().id(), "discrete:p,q");
        assert!(matches!(resolve("hilbert"), Err(Error::UnknownId { .. })));
        assert!(resolve("euclidean:0").is_err());
        assert_eq!(resolve("interval:0:1").unwrap().id(), "interval:0:1");
        assert!(resolve("interval:1:0").is_err());
    }
}
