//! Orbicurve classification and bounds on orbifold indices of targets.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbicurveData {
    genus: u32,
    punctures: u32,
    indices: Vec<u64>,
}

impl OrbicurveData {
    /// Indices are stored in decreasing order.
    pub fn new(genus: u32, punctures: u32, mut indices: Vec<u64>) -> Result<Self> {
        if let Some(&n) = indices.iter().find(|&&n| n < 2) {
            return Err(Error::Invalid(format!("orbifold index {n} is below 2")));
        }
        indices.sort_unstable_by(|a, b| b.cmp(a));
        Ok(OrbicurveData { genus, punctures, indices })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn punctures(&self) -> u32 {
        self.punctures
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn is_compact(&self) -> bool {
        self.punctures == 0
    }

    /// Orbifold Euler characteristic `2 - 2g - b - sum(1 - 1/n)`.
    pub fn euler_characteristic(&self) -> BigRational {
        let int = |v: i64| BigRational::from_integer(BigInt::from(v));
        let mut chi = int(2 - 2 * self.genus as i64 - self.punctures as i64);
        for &n in &self.indices {
            chi -= BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(n));
        }
        chi
    }
}

impl fmt::Display for OrbicurveData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g={}, b={}", self.genus, self.punctures)?;
        for n in &self.indices {
            write!(f, ", {n}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeomClass {
    Spherical,
    Elliptic,
    Hyperbolic,
}

impl fmt::Display for GeomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeomClass::Spherical => "spherical",
            GeomClass::Elliptic => "elliptic",
            GeomClass::Hyperbolic => "hyperbolic",
        })
    }
}

fn compact_spherical(indices: &[u64]) -> bool {
    match indices {
        [] | [_] | [_, _] => true,
        [_, 2, 2] => true,
        [3, 3, 2] | [4, 3, 2] | [5, 3, 2] => true,
        _ => false,
    }
}

pub fn classify_orbicurve(d: &OrbicurveData) -> GeomClass {
    let chi = d.euler_characteristic();
    if chi.is_negative() {
        return GeomClass::Hyperbolic;
    }
    if d.is_compact() && d.genus == 0 && compact_spherical(&d.indices) {
        debug_assert!(chi.is_positive());
        return GeomClass::Spherical;
    }
    GeomClass::Elliptic
}

/// Branch values of the index bound for maps from curves of genus at most
/// `g` with at most `b` punctures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HurwitzBound {
    pub positive_genus: i64,
    pub branch_42: i64,
    pub branch_6: i64,
    pub bound: u64,
}

pub fn hurwitz_index_bound(g: u32, b: u32) -> Result<HurwitzBound> {
    if g == 0 && b == 0 {
        return Err(Error::DegenerateInput("no index bound for a compact genus 0 source".into()));
    }
    let (g, b) = (g as i64, b as i64);
    let positive_genus = 2 * g - 1;
    let branch_42 = 42 * (3 * b + 2 * g - 2);
    let branch_6 = 6 * (4 * b + 2 * g - 2);
    let bound = positive_genus.max(branch_42.max(6)).max(branch_6.max(2));
    Ok(HurwitzBound { positive_genus, branch_42, branch_6, bound: bound as u64 })
}

/// Upper bound on the number of orbifold points of a hyperbolic target.
pub fn orbifold_point_bound(g: u32, b: u32) -> usize {
    (2 * (2 * g as i64 - 2 + b as i64) + 4).max(0) as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBounds {
    pub max_index: Option<u64>,
    pub max_points: Option<usize>,
    pub budget: usize,
}

impl Default for EnumerationBounds {
    fn default() -> Self {
        EnumerationBounds { max_index: None, max_points: None, budget: 1_000_000 }
    }
}

pub fn enumerate_candidate_types(g: u32, b: u32) -> Result<Vec<OrbicurveData>> {
    enumerate_candidate_types_with(g, b, EnumerationBounds::default())
}

/// Every hyperbolic type with genus at most `g`, at most `b` punctures and
/// indices and point counts within the bounds. Fails once more than
/// `bounds.budget` index multisets have been visited.
pub fn enumerate_candidate_types_with(g: u32, b: u32, bounds: EnumerationBounds) -> Result<Vec<OrbicurveData>> {
    let max_points = bounds.max_points.unwrap_or_else(|| orbifold_point_bound(g, b));
    let max_index = match bounds.max_index {
        Some(n) => n,
        None if max_points == 0 => 1,
        None => hurwitz_index_bound(g, b)?.bound,
    };
    let mut visited = 0usize;
    let mut out = Vec::new();
    for genus in 0..=g {
        for punctures in 0..=b {
            let mut stack: Vec<u64> = Vec::new();
            multisets(max_index, max_points, &mut stack, &mut |idx| {
                visited += 1;
                if visited > bounds.budget {
                    return Err(Error::SearchBudgetExceeded(format!(
                        "more than {} index multisets for g <= {g}, b <= {b}",
                        bounds.budget
                    )));
                }
                let d = OrbicurveData::new(genus, punctures, idx.to_vec())?;
                if classify_orbicurve(&d) == GeomClass::Hyperbolic {
                    out.push(d);
                }
                Ok(())
            })?;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

// Non-increasing sequences with entries in 2..=max_index and length at most max_len.
fn multisets(
    max_index: u64,
    max_len: usize,
    stack: &mut Vec<u64>,
    visit: &mut dyn FnMut(&[u64]) -> Result<()>,
) -> Result<()> {
    visit(stack)?;
    if stack.len() == max_len {
        return Ok(());
    }
    let top = stack.last().copied().unwrap_or(max_index);
    for n in 2..=top {
        stack.push(n);
        multisets(max_index, max_len, stack, visit)?;
        stack.pop();
    }
    Ok(())
}

pub fn report_lines(g: u32, b: u32, bound: &HurwitzBound) -> Vec<(String, String)> {
    vec![
        ("genus".into(), g.to_string()),
        ("punctures".into(), b.to_string()),
        ("positive_genus_branch".into(), bound.positive_genus.to_string()),
        ("branch_42".into(), bound.branch_42.to_string()),
        ("branch_6".into(), bound.branch_6.to_string()),
        ("index_bound".into(), bound.bound.to_string()),
        ("orbifold_point_bound".into(), orbifold_point_bound(g, b).to_string()),
    ]
}
