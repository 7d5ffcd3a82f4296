//! Point configurations `A ⊂ Zⁿ` and the Z-affine maps between them.

mod equivalence;
mod hom;
pub mod io;

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::linalg::{lattice_basis, solve_int, IntMatrix};

pub use equivalence::affine_equivalent;
pub use hom::GroupHom;

pub type Point = Vec<BigInt>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("a point configuration needs at least one point")]
    Empty,
    #[error("point {index} has {found} coordinates, expected {expected}")]
    Arity { index: usize, expected: usize, found: usize },
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("map domain rank {found} does not match configuration dimension {expected}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("map sends distinct points {0} and {1} to the same image")]
    Collapse(String, String),
    #[error("{0}")]
    Parse(String),
}

/// A finite set of distinct lattice points, kept in lexicographic order.
/// Equality ignores the name.
#[derive(Clone, Debug)]
pub struct PointConfig {
    dim: usize,
    points: Vec<Point>,
    name: Option<String>,
}

impl PartialEq for PointConfig {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.points == other.points
    }
}

impl Eq for PointConfig {}

impl std::hash::Hash for PointConfig {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.points.hash(state);
    }
}

impl PointConfig {
    /// Builds a configuration, rejecting repeated points.
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self, ConfigError> {
        let (config, dups) = Self::new_dedup(dim, points)?;
        match dups.first() {
            Some(p) => Err(ConfigError::DuplicatePoint(format_point(p))),
            None => Ok(config),
        }
    }

    /// Builds a configuration, silently merging repeated points. The removed
    /// duplicates are returned so callers can warn about them.
    pub fn new_dedup(dim: usize, mut points: Vec<Point>) -> Result<(Self, Vec<Point>), ConfigError> {
        if points.is_empty() {
            return Err(ConfigError::Empty);
        }
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(ConfigError::Arity { index, expected: dim, found: p.len() });
            }
        }
        points.sort();
        let mut dups = Vec::new();
        let mut unique: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if unique.last() == Some(&p) {
                dups.push(p);
            } else {
                unique.push(p);
            }
        }
        Ok((PointConfig { dim, points: unique, name: None }, dups))
    }

    pub fn from_i64(dim: usize, points: &[&[i64]]) -> Result<Self, ConfigError> {
        Self::new(dim, points.iter().map(|p| p.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false: configurations are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn index_of(&self, p: &[BigInt]) -> Option<usize> {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).ok()
    }

    /// Rows `u − u₀` for every point `u`, anchored at the first point.
    pub fn difference_rows(&self) -> IntMatrix {
        let base = &self.points[0];
        IntMatrix::from_rows(
            self.dim,
            self.points.iter().map(|u| u.iter().zip(base).map(|(x, b)| x - b).collect()).collect(),
        )
    }

    /// Subconfiguration on the given point indices.
    pub fn subset(&self, indices: &[usize]) -> PointConfig {
        let pts = indices.iter().map(|&i| self.points[i].clone()).collect();
        PointConfig::new(self.dim, pts).expect("subset of distinct points")
    }

    /// Whether `⟨A − A⟩ = Zⁿ`.
    pub fn is_normalized(&self) -> bool {
        difference_lattice(self) == IntMatrix::identity(self.dim)
    }
}

impl fmt::Display for PointConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_point(p))?;
        }
        write!(f, "}}")
    }
}

pub fn format_point(p: &[BigInt]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// HNF basis (rows) of the difference lattice `⟨A − A⟩`.
pub fn difference_lattice(a: &PointConfig) -> IntMatrix {
    lattice_basis(&a.difference_rows())
}

/// The result of moving a configuration into the lattice its differences
/// generate.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub config: PointConfig,
    /// Z-affine isomorphism `Z^m → Aff(a)` with `theta(config) = a`.
    pub theta: GroupHom,
    /// `index_map[i]` is the index in the original configuration of point `i`
    /// of the normalized one.
    pub index_map: Vec<usize>,
}

/// Re-expresses `a` in coordinates of its affine lattice so that the result
/// spans `Z^m` affinely.
pub fn normalize(a: &PointConfig) -> Normalized {
    let d = difference_lattice(a);
    let m = d.rows();
    if m == a.dim && d == IntMatrix::identity(m) {
        return Normalized {
            config: a.clone(),
            theta: GroupHom::identity(m),
            index_map: (0..a.len()).collect(),
        };
    }
    let anchor = a.points[0].clone();
    let dt = d.transpose();
    let coords: Vec<Point> = a
        .points
        .iter()
        .map(|u| {
            let diff: Vec<BigInt> = u.iter().zip(&anchor).map(|(x, b)| x - b).collect();
            solve_int(&dt, &diff).expect("difference lies in the difference lattice")
        })
        .collect();
    let mut b = PointConfig::new(m, coords.clone()).expect("coordinates of distinct points are distinct");
    b.name = a.name.clone();
    let index_map = b.points.iter().map(|p| coords.iter().position(|q| q == p).unwrap()).collect();
    Normalized { config: b, theta: GroupHom::affine(dt, anchor), index_map }
}

/// Image of `a` under `f`. Without `dedupe`, two points with the same image
/// are an error; with it, images are merged.
pub fn apply_affine(a: &PointConfig, f: &GroupHom, dedupe: bool) -> Result<PointConfig, ConfigError> {
    if f.domain_rank() != a.dim {
        return Err(ConfigError::DomainMismatch { expected: a.dim, found: f.domain_rank() });
    }
    let images: Vec<Point> = a.points.iter().map(|p| f.apply(p)).collect();
    let (mut out, _) = PointConfig::new_dedup(f.codomain_rank(), images.clone())?;
    if !dedupe && out.len() != a.len() {
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                if images[i] == images[j] {
                    return Err(ConfigError::Collapse(format_point(&a.points[i]), format_point(&a.points[j])));
                }
            }
        }
    }
    out.name = a.name.clone();
    Ok(out)
}
