//! Exact combinatorics of the B_n root system.
//!
//! Torus points are stored in the canonical block form
//! `(1^u, (-1)^v, e^{i a_1}^{s_1}, ..., e^{i a_m}^{s_m})` with every angle an
//! exact rational multiple of π, so deciding `α_G(x) = 1` never touches
//! floating point.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// A rational multiple of π.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(Ratio<i64>);

impl Angle {
    /// `num/den · π`.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidElement("angle with zero denominator".into()));
        }
        Ok(Angle(Ratio::new(num, den)))
    }

    pub fn zero() -> Self {
        Angle(Ratio::zero())
    }

    pub fn pi() -> Self {
        Angle(Ratio::one())
    }

    /// The coefficient of π.
    pub fn pi_fraction(&self) -> Ratio<i64> {
        self.0
    }

    /// Representative in `[0, 2π)`.
    pub fn reduce_two_pi(self) -> Self {
        let two = Ratio::from_integer(2);
        let q = (self.0 / two).floor();
        Angle(self.0 - q * two)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_multiple_of_two_pi(&self) -> bool {
        self.reduce_two_pi().is_zero()
    }

    pub fn radians(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64 * core::f64::consts::PI
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle(self.0 + rhs.0)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle(self.0 - rhs.0)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle(-self.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            f.write_str("0")
        } else {
            match *self.0.numer() {
                1 => f.write_str("π")?,
                -1 => f.write_str("-π")?,
                k => write!(f, "{k}π")?,
            }
            if !self.0.is_integer() {
                write!(f, "/{}", self.0.denom())?;
            }
            Ok(())
        }
    }
}

/// Shape of a root up to sign. Indices are zero-based coordinates with
/// `i < j` for the two-coordinate kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootKind {
    /// `e_k`
    Short(usize),
    /// `e_i - e_j`
    Diff(usize, usize),
    /// `e_i + e_j`
    Sum(usize, usize),
}

/// A root of B_n: a [`RootKind`] together with a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root {
    kind: RootKind,
    negative: bool,
}

impl Root {
    pub fn short(k: usize) -> Root {
        Root { kind: RootKind::Short(k), negative: false }
    }

    pub fn diff(i: usize, j: usize) -> Root {
        assert!(i < j, "difference roots need i < j");
        Root { kind: RootKind::Diff(i, j), negative: false }
    }

    pub fn sum(i: usize, j: usize) -> Root {
        assert!(i < j, "sum roots need i < j");
        Root { kind: RootKind::Sum(i, j), negative: false }
    }

    pub fn kind(&self) -> RootKind {
        self.kind
    }

    pub fn is_positive(&self) -> bool {
        !self.negative
    }

    /// The positive root of the pair `±self`.
    pub fn positive(self) -> Root {
        Root { negative: false, ..self }
    }

    pub fn sign(&self) -> i64 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    /// Largest coordinate index the root touches.
    pub fn max_index(&self) -> usize {
        match self.kind {
            RootKind::Short(k) => k,
            RootKind::Diff(_, j) | RootKind::Sum(_, j) => j,
        }
    }

    pub fn involves(&self, index: usize) -> bool {
        match self.kind {
            RootKind::Short(k) => k == index,
            RootKind::Diff(i, j) | RootKind::Sum(i, j) => i == index || j == index,
        }
    }

    /// Integer coefficient vector in the standard basis of `R^n`.
    pub fn coefficients(&self, n: usize) -> Vec<i64> {
        let mut c = alloc::vec![0; n];
        let s = self.sign();
        match self.kind {
            RootKind::Short(k) => c[k] = s,
            RootKind::Diff(i, j) => {
                c[i] = s;
                c[j] = -s;
            }
            RootKind::Sum(i, j) => {
                c[i] = s;
                c[j] = s;
            }
        }
        c
    }

    /// The root with the given coefficient vector, if there is one.
    pub fn from_coefficients(c: &[i64]) -> Option<Root> {
        let support: Vec<usize> = (0..c.len()).filter(|&k| c[k] != 0).collect();
        match support.as_slice() {
            [k] if c[*k].abs() == 1 => Some(Root { kind: RootKind::Short(*k), negative: c[*k] < 0 }),
            [i, j] if c[*i].abs() == 1 && c[*j].abs() == 1 => {
                let (i, j) = (*i, *j);
                if c[i] == c[j] {
                    Some(Root { kind: RootKind::Sum(i, j), negative: c[i] < 0 })
                } else {
                    Some(Root { kind: RootKind::Diff(i, j), negative: c[i] < 0 })
                }
            }
            _ => None,
        }
    }

    /// `α(X)` for the torus coordinates `coords`, without reduction.
    pub fn evaluate(&self, coords: &[Angle]) -> Angle {
        let raw = match self.kind {
            RootKind::Short(k) => coords[k],
            RootKind::Diff(i, j) => coords[i] - coords[j],
            RootKind::Sum(i, j) => coords[i] + coords[j],
        };
        if self.negative {
            -raw
        } else {
            raw
        }
    }

    /// Floating point `α(H)` for a real torus vector.
    pub fn evaluate_real(&self, theta: &[f64]) -> f64 {
        let raw = match self.kind {
            RootKind::Short(k) => theta[k],
            RootKind::Diff(i, j) => theta[i] - theta[j],
            RootKind::Sum(i, j) => theta[i] + theta[j],
        };
        if self.negative {
            -raw
        } else {
            raw
        }
    }
}

impl Neg for Root {
    type Output = Root;
    fn neg(self) -> Root {
        Root { negative: !self.negative, ..self }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        match self.kind {
            RootKind::Short(k) => write!(f, "e{}", k + 1),
            RootKind::Diff(i, j) if self.negative => write!(f, "(e{}-e{})", i + 1, j + 1),
            RootKind::Sum(i, j) if self.negative => write!(f, "(e{}+e{})", i + 1, j + 1),
            RootKind::Diff(i, j) => write!(f, "e{}-e{}", i + 1, j + 1),
            RootKind::Sum(i, j) => write!(f, "e{}+e{}", i + 1, j + 1),
        }
    }
}

/// The `n²` positive roots: short roots, then differences, then sums, each
/// in lexicographic order.
pub fn positive_roots(n: usize) -> Result<Vec<Root>> {
    if n < 2 {
        return Err(Error::InvalidRank { rank: n, min: 2, max: usize::MAX });
    }
    Ok(positive_roots_unchecked(n))
}

pub(crate) fn positive_roots_unchecked(n: usize) -> Vec<Root> {
    let mut out = Vec::with_capacity(n * n);
    out.extend((0..n).map(Root::short));
    for i in 0..n {
        for j in i + 1..n {
            out.push(Root::diff(i, j));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            out.push(Root::sum(i, j));
        }
    }
    out
}

/// One eigenvalue group `e^{±ia}` of multiplicity `mult`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AngleGroup {
    pub angle: Angle,
    pub mult: usize,
}

/// A torus point of SO(2n+1) in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusElement {
    u: usize,
    v: usize,
    groups: Vec<AngleGroup>,
}

impl TorusElement {
    /// Validates `0 < a_j < π`, distinct angles and positive multiplicities,
    /// and sorts the groups by angle.
    pub fn new(u: usize, v: usize, mut groups: Vec<AngleGroup>) -> Result<Self> {
        let zero = Ratio::zero();
        let one = Ratio::one();
        for g in &groups {
            if g.mult == 0 {
                return Err(Error::InvalidElement(format!("angle {} has multiplicity zero", g.angle)));
            }
            let a = g.angle.pi_fraction();
            if a <= zero || a >= one {
                return Err(Error::InvalidElement(format!("angle {} is not strictly between 0 and π", g.angle)));
            }
        }
        groups.sort_by_key(|a| a.angle);
        if groups.windows(2).any(|w| w[0].angle == w[1].angle) {
            return Err(Error::InvalidElement("angles must be distinct".into()));
        }
        let el = TorusElement { u, v, groups };
        if el.rank() == 0 {
            return Err(Error::InvalidElement("rank must be positive".into()));
        }
        Ok(el)
    }

    pub fn identity(n: usize) -> Self {
        TorusElement { u: n, v: 0, groups: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.u + self.v + self.groups.iter().map(|g| g.mult).sum::<usize>()
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn groups(&self) -> &[AngleGroup] {
        &self.groups
    }

    /// Largest angle-group multiplicity, 0 when there are none.
    pub fn max_part(&self) -> usize {
        self.groups.iter().map(|g| g.mult).max().unwrap_or(0)
    }

    /// Index of the group carrying the largest multiplicity; ties go to the
    /// smallest angle.
    pub fn max_group(&self) -> Option<usize> {
        let s = self.max_part();
        self.groups.iter().position(|g| g.mult == s)
    }

    /// The only central element of SO(2n+1) is the identity.
    pub fn is_central(&self) -> bool {
        self.v == 0 && self.groups.is_empty()
    }

    /// Coordinates of the lift `X_x = (0^u, π^v, a_1^{s_1}, ...)`.
    pub fn coordinates(&self) -> Vec<Angle> {
        let mut c = Vec::with_capacity(self.rank());
        c.extend(core::iter::repeat_n(Angle::zero(), self.u));
        c.extend(core::iter::repeat_n(Angle::pi(), self.v));
        for g in &self.groups {
            c.extend(core::iter::repeat_n(g.angle, g.mult));
        }
        c
    }

    pub fn element_type(&self) -> ElementType {
        ElementType::new(self.u, self.v, self.groups.iter().map(|g| g.mult).collect())
    }

    /// Replaces the groups, dropping any whose multiplicity reached zero.
    pub(crate) fn with_counts(&self, u: usize, v: usize, groups: Vec<AngleGroup>) -> Self {
        TorusElement { u, v, groups: groups.into_iter().filter(|g| g.mult > 0).collect() }
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1^{}, -1^{}", self.u, self.v)?;
        for g in &self.groups {
            write!(f, ", e^i{}^{}", g.angle, g.mult)?;
        }
        f.write_str(")")
    }
}

/// Lie type `B_u × D_v × SU(s_1) × ...` of an annihilating root system,
/// which is also the label of a conjugacy class up to the choice of angles.
/// Parts are kept in descending order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementType {
    pub u: usize,
    pub v: usize,
    pub parts: Vec<usize>,
}

impl ElementType {
    pub fn new(u: usize, v: usize, mut parts: Vec<usize>) -> Self {
        parts.retain(|&s| s > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        ElementType { u, v, parts }
    }

    pub fn rank(&self) -> usize {
        self.u + self.v + self.parts.iter().sum::<usize>()
    }

    pub fn is_central(&self) -> bool {
        self.v == 0 && self.parts.is_empty()
    }

    pub fn max_part(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Representative with angles `a_j = jπ/(m+2)`. These never satisfy an
    /// accidental relation, so the element has exactly this type. The
    /// largest part gets the smallest angle.
    pub fn canonical_element(&self) -> TorusElement {
        let m = self.parts.len() as i64;
        let groups = self
            .parts
            .iter()
            .enumerate()
            .map(|(j, &mult)| AngleGroup { angle: Angle(Ratio::new(j as i64 + 1, m + 2)), mult })
            .collect();
        TorusElement { u: self.u, v: self.v, groups }
    }

    /// Every type of rank `n`, ordered by `u`, then `v`, then parts in
    /// reverse lexicographic order.
    pub fn enumerate(n: usize) -> Vec<ElementType> {
        let mut out = Vec::new();
        for u in 0..=n {
            for v in 0..=n - u {
                for parts in partitions(n - u - v) {
                    out.push(ElementType { u, v, parts });
                }
            }
        }
        out
    }

    pub fn enumerate_non_central(n: usize) -> Vec<ElementType> {
        Self::enumerate(n).into_iter().filter(|t| !t.is_central()).collect()
    }
}

impl fmt::Display for ElementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_type_label(f, self.u, self.v, &self.parts)
    }
}

fn write_type_label(f: &mut fmt::Formatter<'_>, b: usize, d: usize, parts: &[usize]) -> fmt::Result {
    let mut first = true;
    let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
        if !first {
            f.write_str("x")?;
        }
        first = false;
        Ok(())
    };
    if b > 0 {
        sep(f)?;
        write!(f, "B{b}")?;
    }
    if d > 0 {
        sep(f)?;
        write!(f, "D{d}")?;
    }
    for s in parts {
        sep(f)?;
        write!(f, "SU({s})")?;
    }
    if first {
        f.write_str("B0")?;
    }
    Ok(())
}

/// Partitions of `r` into positive parts, each in descending order, listed
/// in reverse lexicographic order. `partitions(0)` is the single empty one.
pub fn partitions(r: usize) -> Vec<Vec<usize>> {
    fn go(r: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if r == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=r.min(cap)).rev() {
            prefix.push(p);
            go(r - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(r, r, &mut Vec::new(), &mut out);
    out
}

/// `α(X_x) mod 2π`, as a rational multiple of π in `[0, 2)`.
pub fn root_value(alpha: Root, x: &TorusElement) -> Result<Angle> {
    let n = x.rank();
    if alpha.max_index() >= n {
        return Err(Error::IndexOutOfRange { index: alpha.max_index(), rank: n });
    }
    Ok(alpha.evaluate(&x.coordinates()).reduce_two_pi())
}

/// Positive roots annihilated by the group element with coordinates
/// `coords`, i.e. `α(X) ≡ 0 mod 2π`.
pub fn annihilating_roots(coords: &[Angle]) -> Vec<Root> {
    positive_roots_unchecked(coords.len()).into_iter().filter(|a| a.evaluate(coords).is_multiple_of_two_pi()).collect()
}

/// Positive roots with `α(X) = 0` exactly (the Lie algebra annihilator).
pub fn lie_annihilating_roots(coords: &[Angle]) -> Vec<Root> {
    positive_roots_unchecked(coords.len()).into_iter().filter(|a| a.evaluate(coords).is_zero()).collect()
}

/// Root system of an annihilator, `B_b × D_d × SU(s_1) × ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilatorDecomposition {
    pub b_rank: usize,
    pub d_rank: usize,
    pub su_parts: Vec<usize>,
    pub positive_root_count: usize,
}

impl AnnihilatorDecomposition {
    fn from_ranks(b_rank: usize, d_rank: usize, mut su_parts: Vec<usize>) -> Self {
        su_parts.retain(|&s| s > 0);
        su_parts.sort_unstable_by(|a, b| b.cmp(a));
        let positive_root_count = b_rank * b_rank
            + d_rank * d_rank.saturating_sub(1)
            + su_parts.iter().map(|s| s * (s - 1) / 2).sum::<usize>();
        AnnihilatorDecomposition { b_rank, d_rank, su_parts, positive_root_count }
    }
}

impl fmt::Display for AnnihilatorDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_type_label(f, self.b_rank, self.d_rank, &self.su_parts)
    }
}

/// Positive roots of `Ψ_0 ∪ Ψ_π ∪ ⋃ Ψ_ℓ` for the canonical layout of `x`.
/// With `lie = true` the `π` block contributes only its differences.
fn closed_form_roots(x: &TorusElement, lie: bool) -> Vec<Root> {
    let mut out = Vec::new();
    let (u, v) = (x.u, x.v);
    for k in 0..u {
        out.push(Root::short(k));
    }
    let block = |lo: usize, hi: usize, sums: bool, out: &mut Vec<Root>| {
        for i in lo..hi {
            for j in i + 1..hi {
                out.push(Root::diff(i, j));
                if sums {
                    out.push(Root::sum(i, j));
                }
            }
        }
    };
    block(0, u, true, &mut out);
    block(u, u + v, !lie, &mut out);
    let mut lo = u + v;
    for g in &x.groups {
        block(lo, lo + g.mult, false, &mut out);
        lo += g.mult;
    }
    out.sort();
    out
}

/// Annihilating roots of `x` and their decomposition. The decomposition is
/// read off the canonical form and checked against root-by-root evaluation.
pub fn annihilator(x: &TorusElement) -> AnnihilatorDecomposition {
    let mut found = annihilating_roots(&x.coordinates());
    found.sort();
    assert_eq!(found, closed_form_roots(x, false), "annihilator disagrees with the canonical decomposition");
    let dec = AnnihilatorDecomposition::from_ranks(x.u, x.v, x.groups.iter().map(|g| g.mult).collect());
    debug_assert_eq!(dec.positive_root_count, found.len());
    dec
}

/// Annihilator of the lift `X_x`: the `-1` block becomes `SU(v)`.
pub fn lie_annihilator(x: &TorusElement) -> AnnihilatorDecomposition {
    let mut found = lie_annihilating_roots(&x.coordinates());
    found.sort();
    assert_eq!(found, closed_form_roots(x, true), "Lie annihilator disagrees with the canonical decomposition");
    let mut parts: Vec<usize> = x.groups.iter().map(|g| g.mult).collect();
    parts.push(x.v);
    let dec = AnnihilatorDecomposition::from_ranks(x.u, 0, parts);
    debug_assert_eq!(dec.positive_root_count, found.len());
    dec
}

/// `dim C_x = |N_x| = 2(n² - u² - v(v-1) - Σ s_j(s_j-1)/2)`.
pub fn conjugacy_class_dim(x: &TorusElement) -> usize {
    let n = x.rank();
    let parts: usize = x.groups.iter().map(|g| g.mult * (g.mult - 1) / 2).sum();
    2 * (n * n - x.u * x.u - x.v * x.v.saturating_sub(1) - parts)
}

/// `dim O_{X_x} = 2(n² - u² - v(v-1)/2 - Σ s_j(s_j-1)/2)`.
pub fn adjoint_orbit_dim(x: &TorusElement) -> usize {
    let n = x.rank();
    let parts: usize = x.groups.iter().map(|g| g.mult * (g.mult - 1) / 2).sum();
    2 * (n * n - x.u * x.u - x.v * x.v.saturating_sub(1) / 2 - parts)
}
