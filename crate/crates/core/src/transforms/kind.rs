use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Scalar;

/// Transformation family, without its auxiliary data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformTag {
    Mpe,
    Rre,
    Mmpe,
    Topological,
    VectorEpsilon,
    ScalarEpsilon,
}

impl TransformTag {
    pub const ALL: [TransformTag; 6] = [
        TransformTag::Mpe,
        TransformTag::Rre,
        TransformTag::Mmpe,
        TransformTag::Topological,
        TransformTag::VectorEpsilon,
        TransformTag::ScalarEpsilon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransformTag::Mpe => "mpe",
            TransformTag::Rre => "rre",
            TransformTag::Mmpe => "mmpe",
            TransformTag::Topological => "topological",
            TransformTag::VectorEpsilon => "vector-epsilon",
            TransformTag::ScalarEpsilon => "scalar-epsilon",
        }
    }

    pub fn is_epsilon(self) -> bool {
        matches!(
            self,
            TransformTag::VectorEpsilon | TransformTag::ScalarEpsilon
        )
    }

    /// Number of sweeps `l` between the base iterate and the last one a transform of order `k`
    /// reads: `2k` for the epsilon algorithms and the topological transformation, `k + 1` otherwise.
    pub fn window_len(self, k: usize) -> usize {
        match self {
            TransformTag::VectorEpsilon
            | TransformTag::ScalarEpsilon
            | TransformTag::Topological => 2 * k,
            TransformTag::Mpe | TransformTag::Rre | TransformTag::Mmpe => k + 1,
        }
    }
}

impl fmt::Display for TransformTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransformTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let tag = match key.as_str() {
            "mpe" => TransformTag::Mpe,
            "rre" => TransformTag::Rre,
            "mmpe" => TransformTag::Mmpe,
            "topological" | "tea" | "topological-epsilon" => TransformTag::Topological,
            "vector-epsilon" | "vea" | "epsilon" => TransformTag::VectorEpsilon,
            "scalar-epsilon" | "sea" => TransformTag::ScalarEpsilon,
            _ => return Err(Error::Config(format!("unknown transform `{s}`"))),
        };
        Ok(tag)
    }
}

/// How auxiliary vectors (`y` for the topological kind, `y_1 .. y_k` for MMPE) are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxPolicy {
    /// Components uniform in `[-1, 1]` from a seeded generator.
    Random { seed: u64 },
    /// `(1, ..., 1)`
    Ones,
    /// `e_1, ..., e_k`
    Canonical,
}

impl AuxPolicy {
    pub fn name(self) -> &'static str {
        match self {
            AuxPolicy::Random { .. } => "random",
            AuxPolicy::Ones => "ones",
            AuxPolicy::Canonical => "canonical",
        }
    }

    /// Parses `random`, `ones` or `canonical`; `seed` is used by `random`.
    pub fn parse(s: &str, seed: u64) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "random" => Ok(AuxPolicy::Random { seed }),
            "ones" => Ok(AuxPolicy::Ones),
            "canonical" => Ok(AuxPolicy::Canonical),
            _ => Err(Error::Config(format!(
                "unknown auxiliary vector policy `{s}`"
            ))),
        }
    }

    /// `count` vectors of length `n`.
    pub fn vectors<T: Scalar>(self, n: usize, count: usize) -> Result<Vec<Vec<T>>> {
        match self {
            AuxPolicy::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok((0..count)
                    .map(|_| {
                        (0..n)
                            .map(|_| T::of(rng.random_range(-1.0..=1.0)))
                            .collect()
                    })
                    .collect())
            }
            AuxPolicy::Ones => Ok(vec![vec![T::one(); n]; count]),
            AuxPolicy::Canonical => {
                if count > n {
                    return Err(Error::Config(format!(
                        "{count} canonical vectors requested in dimension {n}"
                    )));
                }
                Ok((0..count)
                    .map(|i| {
                        let mut e = vec![T::zero(); n];
                        e[i] = T::one();
                        e
                    })
                    .collect())
            }
        }
    }
}

/// A transformation with its auxiliary vectors.
#[derive(Debug, Clone, PartialEq)]
pub enum TransformKind<T> {
    Mpe,
    Rre,
    /// `d_{i,j} = (y_i, dx_{n+j})`; the `y_i` are linearly independent.
    Mmpe {
        aux: Vec<Vec<T>>,
    },
    /// `d_{i,j} = (y, dx_{n+i+j-1})`
    Topological {
        y: Vec<T>,
    },
    VectorEpsilon,
    /// The scalar epsilon algorithm applied to each component.
    ScalarEpsilon,
}

impl<T: Scalar> TransformKind<T> {
    pub fn mmpe(aux: Vec<Vec<T>>) -> Result<Self> {
        if aux.is_empty() {
            return Err(Error::Config(
                "MMPE needs at least one auxiliary vector".into(),
            ));
        }
        let n = aux[0].len();
        if aux.iter().any(|y| y.len() != n) {
            return Err(Error::Config(
                "MMPE auxiliary vectors differ in length".into(),
            ));
        }
        if aux.len() > n {
            return Err(Error::Config(format!(
                "{} MMPE auxiliary vectors cannot be independent in dimension {n}",
                aux.len()
            )));
        }
        let ratio = DenseMatrix::from_columns(&aux).qr().diagonal_ratio();
        if !(ratio > T::of(1e-12)) {
            return Err(Error::Config(
                "MMPE auxiliary vectors are linearly dependent".into(),
            ));
        }
        Ok(TransformKind::Mmpe { aux })
    }

    /// Builds the kind for order `k` in dimension `n`, drawing auxiliary vectors from `policy`.
    pub fn from_tag(tag: TransformTag, n: usize, k: usize, policy: AuxPolicy) -> Result<Self> {
        Ok(match tag {
            TransformTag::Mpe => TransformKind::Mpe,
            TransformTag::Rre => TransformKind::Rre,
            TransformTag::VectorEpsilon => TransformKind::VectorEpsilon,
            TransformTag::ScalarEpsilon => TransformKind::ScalarEpsilon,
            TransformTag::Mmpe => Self::mmpe(policy.vectors(n, k)?)?,
            TransformTag::Topological => TransformKind::Topological {
                y: policy.vectors(n, 1)?.remove(0),
            },
        })
    }

    pub fn tag(&self) -> TransformTag {
        match self {
            TransformKind::Mpe => TransformTag::Mpe,
            TransformKind::Rre => TransformTag::Rre,
            TransformKind::Mmpe { .. } => TransformTag::Mmpe,
            TransformKind::Topological { .. } => TransformTag::Topological,
            TransformKind::VectorEpsilon => TransformTag::VectorEpsilon,
            TransformKind::ScalarEpsilon => TransformTag::ScalarEpsilon,
        }
    }

    pub fn window_len(&self, k: usize) -> usize {
        self.tag().window_len(k)
    }
}
