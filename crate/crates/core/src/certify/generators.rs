//! Generator families for positivity certificates.
//!
//! Over weights `c_1, c_2, ...` with `c_0 = 1`:
//!
//! - `X = {c_1, c_2, ...}`
//! - `Y = X ∪ {c_j c_k - c_{j-1} c_{k+1} : 0 < j <= k}`
//! - `Z = X ∪ {c_{j-1} c_{k+1} - c_j c_k : 0 < j <= k}`
//!
//! A set is truncated at `max_index`: pair generators appear only when
//! `k + 1 <= max_index`. Every generator is homogeneous for the grading
//! `weight(c_j) = j`, which the cone search relies on.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::sympoly::{Alphabet, MultiPoly};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GenKind {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GenShape {
    /// `c_j` (of family `family` when several are present).
    Single { family: usize, j: usize },
    /// The pair difference at `(j, k)`.
    Pair { family: usize, j: usize, k: usize },
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub shape: GenShape,
    pub name: String,
    pub poly: MultiPoly,
    pub weight: u32,
    pub degree: u32,
}

#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub kind: GenKind,
    pub families: usize,
    pub max_index: usize,
    alphabet: Arc<Alphabet>,
    var_weights: Vec<u32>,
    generators: Vec<Generator>,
}

impl GeneratorSet {
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Generator> {
        self.generators.get(i)
    }

    /// Grading of each alphabet variable.
    pub fn var_weights(&self) -> &[u32] {
        &self.var_weights
    }

    /// Index of `c_j` (family 0).
    pub fn single_index(&self, j: usize) -> Option<usize> {
        self.generators
            .iter()
            .position(|g| g.shape == GenShape::Single { family: 0, j })
    }

    /// Index of the pair generator `(j, k)` (family 0).
    pub fn pair_index(&self, j: usize, k: usize) -> Option<usize> {
        self.generators
            .iter()
            .position(|g| g.shape == GenShape::Pair { family: 0, j, k })
    }

    pub fn names(&self) -> Vec<GeneratorJson> {
        self.generators
            .iter()
            .map(|g| GeneratorJson { name: g.name.clone(), expr: g.poly.to_string() })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    pub expr: String,
}

/// Alphabet `c_1..c_n` for one family, `c_{i,j}` (written `c_i_j`) for several.
pub fn weight_alphabet(families: usize, max_index: usize) -> Arc<Alphabet> {
    if families == 1 {
        Alphabet::weights(max_index)
    } else {
        let mut names = Vec::with_capacity(families * max_index);
        for i in 1..=families {
            for j in 1..=max_index {
                names.push(format!("c_{i}_{j}"));
            }
        }
        Alphabet::new(names)
    }
}

/// `c_{family, j}` over [`weight_alphabet`]; `j = 0` gives 1.
pub fn family_var(alpha: &Arc<Alphabet>, max_index: usize, family: usize, j: usize) -> MultiPoly {
    if j == 0 {
        MultiPoly::one(alpha)
    } else {
        MultiPoly::var(alpha, family * max_index + j - 1)
    }
}

pub fn build_generator_set(kind: GenKind, max_index: usize) -> Result<GeneratorSet> {
    build_union_generator_set(kind, 1, max_index)
}

/// Union over `families` independent weight families, each truncated at
/// `max_index`. Generators never mix families.
pub fn build_union_generator_set(kind: GenKind, families: usize, max_index: usize) -> Result<GeneratorSet> {
    if max_index == 0 {
        return Err(Error::invalid("max_index must be at least 1"));
    }
    if families == 0 {
        return Err(Error::invalid("need at least one family"));
    }
    let alpha = weight_alphabet(families, max_index);
    let var_weights = (0..families)
        .flat_map(|_| (1..=max_index as u32).collect::<Vec<_>>())
        .collect();
    let label = |f: usize, j: usize| {
        if families == 1 {
            format!("c_{j}")
        } else {
            format!("c_{}_{j}", f + 1)
        }
    };
    let mut generators = Vec::new();
    for f in 0..families {
        for j in 1..=max_index {
            generators.push(Generator {
                shape: GenShape::Single { family: f, j },
                name: label(f, j),
                poly: family_var(&alpha, max_index, f, j),
                weight: j as u32,
                degree: 1,
            });
        }
    }
    if kind != GenKind::X {
        for f in 0..families {
            for j in 1..max_index {
                for k in j..max_index {
                    let v = |i| family_var(&alpha, max_index, f, i);
                    let balanced = &v(j) * &v(k);
                    let spread = &v(j - 1) * &v(k + 1);
                    let (poly, tag) = match kind {
                        GenKind::Y => (&balanced - &spread, "y"),
                        _ => (&spread - &balanced, "z"),
                    };
                    let name = if families == 1 {
                        format!("{tag}_{j}_{k}")
                    } else {
                        format!("{tag}_{}_{j}_{k}", f + 1)
                    };
                    generators.push(Generator {
                        shape: GenShape::Pair { family: f, j, k },
                        name,
                        poly,
                        weight: (j + k) as u32,
                        degree: 2,
                    });
                }
            }
        }
    }
    Ok(GeneratorSet { kind, families, max_index, alphabet: alpha, var_weights, generators })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exprs(g: &GeneratorSet) -> Vec<String> {
        g.generators().iter().map(|g| g.poly.to_string()).collect()
    }

    #[test]
    fn y_at_two() {
        let g = build_generator_set(GenKind::Y, 2).unwrap();
        assert_eq!(exprs(&g), vec!["c_1", "c_2", "c_1^2 - c_2"]);
    }

    #[test]
    fn z_at_two() {
        let g = build_generator_set(GenKind::Z, 2).unwrap();
        assert_eq!(exprs(&g), vec!["c_1", "c_2", "-c_1^2 + c_2"]);
    }

    #[test]
    fn x_at_three() {
        let g = build_generator_set(GenKind::X, 3).unwrap();
        assert_eq!(exprs(&g), vec!["c_1", "c_2", "c_3"]);
    }

    #[test]
    fn pair_ordering_and_weights() {
        let g = build_generator_set(GenKind::Y, 4).unwrap();
        let pairs: Vec<_> = g
            .generators()
            .iter()
            .filter_map(|g| match g.shape {
                GenShape::Pair { j, k, .. } => Some((j, k, g.weight)),
                _ => None,
            })
            .collect();
        assert_eq!(pairs, vec![(1, 1, 2), (1, 2, 3), (1, 3, 4), (2, 2, 4), (2, 3, 5), (3, 3, 6)]);
        assert_eq!(g.pair_index(2, 2), Some(7));
    }

    #[test]
    fn families_stay_separate() {
        let g = build_union_generator_set(GenKind::Y, 2, 2).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.alphabet().names(), &["c_1_1", "c_1_2", "c_2_1", "c_2_2"]);
        assert_eq!(g.generators()[5].poly.to_string(), "c_2_1^2 - c_2_2");
    }

    #[test]
    fn rejects_zero_index() {
        assert!(build_generator_set(GenKind::X, 0).is_err());
    }
}
