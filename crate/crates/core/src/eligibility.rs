//! Dominant types, parity and the eligibility decision for tuples of torus
//! elements of SO(2n+1), together with reduction to rank `n-1`, forced
//! eigenvalue certificates for ineligible tuples, and the analogous
//! (conjectural) eligibility rules for the groups of type C_n and D_n.

use alloc::vec::Vec;
use core::fmt;

use crate::rootsys::{Angle, AngleGroup, TorusElement};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DominantKind {
    B,
    D,
    BD,
    S,
}

impl fmt::Display for DominantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DominantKind::B => "B",
            DominantKind::D => "D",
            DominantKind::BD => "BD",
            DominantKind::S => "S",
        })
    }
}

/// Dominant type of a torus element with the dimension of its largest
/// eigenspace. `BD` carries both the `+1` eigenspace dimension `2u+1` and
/// the `-1` eigenspace dimension `2v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DominantClass {
    B { s: usize },
    D { s: usize },
    BD { s1: usize, s2: usize },
    S { s: usize },
}

impl DominantClass {
    /// Classification from `u`, `v` and the largest angle multiplicity.
    pub fn from_counts(u: usize, v: usize, s: usize) -> Self {
        let b = u > v && 2 * u + 1 > s;
        let d = v > u && 2 * v > s;
        let bd = u == v && 2 * v >= s;
        let sk = s > 2 * u && s >= 2 * v;
        debug_assert_eq!(b as u8 + d as u8 + bd as u8 + sk as u8, 1);
        if b {
            DominantClass::B { s: 2 * u + 1 }
        } else if d {
            DominantClass::D { s: 2 * v }
        } else if bd {
            DominantClass::BD { s1: 2 * u + 1, s2: 2 * v }
        } else {
            DominantClass::S { s }
        }
    }

    pub fn kind(&self) -> DominantKind {
        match self {
            DominantClass::B { .. } => DominantKind::B,
            DominantClass::D { .. } => DominantKind::D,
            DominantClass::BD { .. } => DominantKind::BD,
            DominantClass::S { .. } => DominantKind::S,
        }
    }

    /// `S_x` for kinds B, D and S.
    pub fn s_value(&self) -> Option<usize> {
        match *self {
            DominantClass::B { s } | DominantClass::D { s } | DominantClass::S { s } => Some(s),
            DominantClass::BD { .. } => None,
        }
    }

    /// `(S^(1), S^(2))` for kind BD.
    pub fn s_pair(&self) -> Option<(usize, usize)> {
        match *self {
            DominantClass::BD { s1, s2 } => Some((s1, s2)),
            _ => None,
        }
    }

    /// `S_x`, or `S^(p)` for kind BD.
    pub fn s_for_parity(&self, p: Parity) -> usize {
        match *self {
            DominantClass::BD { s1, s2 } => match p {
                Parity::Odd => s1,
                Parity::Even => s2,
            },
            DominantClass::B { s } | DominantClass::D { s } | DominantClass::S { s } => s,
        }
    }
}

impl fmt::Display for DominantClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DominantClass::BD { s1, s2 } => write!(f, "BD (S = ({s1}, {s2}))"),
            other => write!(f, "{} (S = {})", other.kind(), other.s_value().unwrap_or(0)),
        }
    }
}

pub fn dominant_class(x: &TorusElement) -> DominantClass {
    DominantClass::from_counts(x.u(), x.v(), x.max_part())
}

/// Parity of a tuple: `p = 1` for an odd number of dominant-D elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn value(&self) -> i64 {
        match self {
            Parity::Odd => 1,
            Parity::Even => 2,
        }
    }
}

pub fn parity(classes: &[DominantClass]) -> Result<Parity> {
    if classes.is_empty() {
        return Err(Error::EmptyTuple);
    }
    let d = classes.iter().filter(|c| c.kind() == DominantKind::D).count();
    Ok(if d % 2 == 1 { Parity::Odd } else { Parity::Even })
}

/// Which clause of the eligibility rule decided the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EligibilityCase {
    /// At least two elements of dominant type BD or S; always eligible.
    TwoLarge,
    /// Exactly one dominant S, no BD.
    SingleS,
    /// Exactly one dominant BD, no S.
    SingleBD,
    /// Only dominant B and D elements.
    BAndD,
    /// Single non-central element, or a Lie algebra verdict.
    NotApplicable,
}

impl EligibilityCase {
    /// `i` to `iv`, or `n/a`.
    pub fn label(&self) -> &'static str {
        match self {
            EligibilityCase::TwoLarge => "i",
            EligibilityCase::SingleS => "ii",
            EligibilityCase::SingleBD => "iii",
            EligibilityCase::BAndD => "iv",
            EligibilityCase::NotApplicable => "n/a",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EligibilityVerdict {
    pub eligible: bool,
    pub case: EligibilityCase,
    pub parity: Parity,
    /// Sides of the deciding inequality `lhs <= rhs`; both 0 for
    /// [`EligibilityCase::TwoLarge`].
    pub lhs: i64,
    pub rhs: i64,
    pub rank: usize,
    /// Number of non-central elements the verdict is about.
    pub len: usize,
    pub dropped_central: usize,
}

impl EligibilityVerdict {
    pub fn slack(&self) -> i64 {
        self.rhs - self.lhs
    }
}

fn common_rank(tuple: &[TorusElement]) -> Result<usize> {
    let first = tuple.first().ok_or(Error::EmptyTuple)?.rank();
    for x in tuple {
        if x.rank() != first {
            return Err(Error::RankMismatch(first, x.rank()));
        }
    }
    Ok(first)
}

/// Non-central elements of the tuple, with the common rank and the
/// number of identities removed.
pub fn non_central(tuple: &[TorusElement]) -> Result<(usize, Vec<&TorusElement>, usize)> {
    let n = common_rank(tuple)?;
    let kept: Vec<&TorusElement> = tuple.iter().filter(|x| !x.is_central()).collect();
    if kept.is_empty() {
        return Err(Error::AllCentral);
    }
    let dropped = tuple.len() - kept.len();
    Ok((n, kept, dropped))
}

/// Decides eligibility. Identities are dropped first; a single remaining
/// non-central element is ineligible, since one conjugacy class is a proper
/// submanifold.
pub fn decide_eligibility(tuple: &[TorusElement]) -> Result<EligibilityVerdict> {
    let (n, kept, dropped) = non_central(tuple)?;
    let classes: Vec<DominantClass> = kept.iter().map(|x| dominant_class(x)).collect();
    Ok(decide_classes(n, &classes, dropped))
}

pub(crate) fn decide_classes(n: usize, classes: &[DominantClass], dropped: usize) -> EligibilityVerdict {
    let p = parity(classes).expect("tuple has at least one element");
    let len = classes.len();
    let mut verdict = EligibilityVerdict {
        eligible: false,
        case: EligibilityCase::NotApplicable,
        parity: p,
        lhs: 0,
        rhs: 0,
        rank: n,
        len,
        dropped_central: dropped,
    };
    if len == 1 {
        verdict.lhs = classes[0].s_for_parity(p) as i64;
        return verdict;
    }
    let count = |k: DominantKind| classes.iter().filter(|c| c.kind() == k).count();
    let (n_s, n_bd) = (count(DominantKind::S), count(DominantKind::BD));
    let bound = (2 * n as i64 + 1) * (len as i64 - 1);
    let total: i64 = classes.iter().map(|c| c.s_for_parity(p) as i64).sum();
    if n_s + n_bd >= 2 {
        verdict.case = EligibilityCase::TwoLarge;
        verdict.eligible = true;
        return verdict;
    }
    let (case, rhs) = if n_s == 1 {
        (EligibilityCase::SingleS, bound)
    } else if n_bd == 1 {
        (EligibilityCase::SingleBD, bound)
    } else {
        (EligibilityCase::BAndD, bound + p.value() - 1)
    };
    verdict.case = case;
    verdict.lhs = total;
    verdict.rhs = rhs;
    verdict.eligible = total <= rhs;
    verdict
}

/// Dominant type of the lift `X_x` in so(2n+1): B with `S = 2u` when
/// `2u > max(s_j, v)`, otherwise S with `S = max(s_j, v)`.
pub fn lie_dominant_s(x: &TorusElement) -> (DominantKind, usize) {
    let s = x.max_part().max(x.v());
    if 2 * x.u() > s {
        (DominantKind::B, 2 * x.u())
    } else {
        (DominantKind::S, s)
    }
}

/// Eligibility of the lifts in the Lie algebra: `Σ S^g <= 2n(L-1)`.
pub fn decide_lie_eligibility(tuple: &[TorusElement]) -> Result<EligibilityVerdict> {
    let (n, kept, dropped) = non_central(tuple)?;
    let classes: Vec<DominantClass> = kept.iter().map(|x| dominant_class(x)).collect();
    let len = kept.len();
    let lhs: i64 = kept.iter().map(|x| lie_dominant_s(x).1 as i64).sum();
    let rhs = 2 * n as i64 * (len as i64 - 1);
    Ok(EligibilityVerdict {
        eligible: len >= 2 && lhs <= rhs,
        case: EligibilityCase::NotApplicable,
        parity: parity(&classes)?,
        lhs,
        rhs,
        rank: n,
        len,
        dropped_central: dropped,
    })
}

/// Index into the canonical coordinates of the coordinate that reduction
/// removes: the first `1` for kinds B and BD, the first `-1` for kind D, and
/// the first coordinate of the maximal angle group for kind S.
pub fn reduction_index(x: &TorusElement) -> Result<usize> {
    if x.rank() < 3 {
        return Err(Error::NotReducible("rank below 3 is the base case"));
    }
    if x.is_central() {
        return Err(Error::NotReducible("central elements are not reduced"));
    }
    Ok(match dominant_class(x).kind() {
        DominantKind::B | DominantKind::BD => 0,
        DominantKind::D => x.u(),
        DominantKind::S => {
            let g = x.max_group().expect("dominant S has an angle group");
            x.u() + x.v() + x.groups()[..g].iter().map(|g| g.mult).sum::<usize>()
        }
    })
}

/// The reduction `x'` of rank `n-1`.
pub fn reduce(x: &TorusElement) -> Result<TorusElement> {
    reduction_index(x)?;
    let mut groups: Vec<AngleGroup> = x.groups().to_vec();
    Ok(match dominant_class(x).kind() {
        DominantKind::B | DominantKind::BD => x.with_counts(x.u() - 1, x.v(), groups),
        DominantKind::D => x.with_counts(x.u(), x.v() - 1, groups),
        DominantKind::S => {
            let g = x.max_group().expect("dominant S has an angle group");
            groups[g].mult -= 1;
            x.with_counts(x.u(), x.v(), groups)
        }
    })
}

/// Coordinates of `x` reordered so the coordinate removed by reduction comes
/// first; the remaining coordinates are those of `reduce(x)`.
pub fn reduction_coordinates(x: &TorusElement) -> Result<Vec<Angle>> {
    let k = reduction_index(x)?;
    let mut c = x.coordinates();
    let removed = c.remove(k);
    c.insert(0, removed);
    Ok(c)
}

/// Forced eigenvalue data for an ineligible tuple: every product of
/// conjugates has an eigenvalue `e^{iθπ}` for some `θ` in
/// `forced_eigenvalues` with multiplicity at least `multiplicity_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecessityCertificate {
    /// Eigenvalue angles as multiples of π in `[0, 2)`. A complex forced
    /// eigenvalue is listed together with its conjugate.
    pub forced_eigenvalues: Vec<Angle>,
    pub multiplicity_bound: usize,
    /// `Σ dim V_j - (L-1)(2n+1)` for the chosen eigenspaces `V_j`.
    pub deficit: i64,
    pub kind: ForcedKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForcedKind {
    /// `-1` from the intersection of the dominant `±1` eigenspaces.
    MinusOne,
    /// A second `+1` beyond the one every element of SO(2n+1) has.
    PlusOne,
    /// `±e^{±ia}` from the maximal angle group of the dominant S element.
    Rotation,
}

/// Certificate of ineligibility, `None` for eligible tuples. Uses the
/// eigenspace of dimension `S_{x_j}` of each element (`S^(p)` for a BD
/// element) and the intersection bound
/// `dim ∩ V_j >= Σ dim V_j - (L-1)(2n+1)`.
pub fn necessity_certificate(tuple: &[TorusElement]) -> Result<Option<NecessityCertificate>> {
    let verdict = decide_eligibility(tuple)?;
    if verdict.eligible {
        return Ok(None);
    }
    let (n, kept, _) = non_central(tuple)?;
    let classes: Vec<DominantClass> = kept.iter().map(|x| dominant_class(x)).collect();
    let p = verdict.parity;
    let len = kept.len() as i64;
    let total: i64 = classes.iter().map(|c| c.s_for_parity(p) as i64).sum();
    let deficit = total - (len - 1) * (2 * n as i64 + 1);
    let d_odd = p == Parity::Odd;
    let s_index = classes.iter().position(|c| c.kind() == DominantKind::S);
    let bd_present = classes.iter().any(|c| c.kind() == DominantKind::BD);
    let (kind, forced) = if let Some(i) = s_index {
        let x = kept[i];
        let a = x.groups()[x.max_group().expect("dominant S has an angle group")].angle;
        let shift = if d_odd { Angle::pi() } else { Angle::zero() };
        let mut angles = alloc::vec![(a + shift).reduce_two_pi(), (shift - a).reduce_two_pi()];
        angles.sort();
        (ForcedKind::Rotation, angles)
    } else if bd_present || d_odd {
        (ForcedKind::MinusOne, alloc::vec![Angle::pi()])
    } else {
        (ForcedKind::PlusOne, alloc::vec![Angle::zero()])
    };
    debug_assert!(deficit >= if kind == ForcedKind::PlusOne { 2 } else { 1 });
    Ok(Some(NecessityCertificate {
        forced_eigenvalues: forced,
        multiplicity_bound: deficit.max(1) as usize,
        deficit,
        kind,
    }))
}

/// Lie group family for the torus form shared by C_n and D_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    C,
    D,
}

/// Torus element of C_n or D_n, `(1^u, (-1)^v, e^{ia_1}^{s_1}, ...)` with
/// `u >= v` and parts in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CDElement {
    family: Family,
    u: usize,
    v: usize,
    parts: Vec<usize>,
}

impl CDElement {
    pub fn new(family: Family, u: usize, v: usize, mut parts: Vec<usize>) -> Result<Self> {
        if u < v {
            return Err(Error::InvalidElement("C/D normal form needs u >= v".into()));
        }
        parts.retain(|&s| s > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let el = CDElement { family, u, v, parts };
        if el.rank() == 0 {
            return Err(Error::InvalidElement("rank must be positive".into()));
        }
        Ok(el)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.u + self.v + self.parts.iter().sum::<usize>()
    }

    pub fn counts(&self) -> (usize, usize, &[usize]) {
        (self.u, self.v, &self.parts)
    }

    fn max_part(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Dominant C (or D) when `2u >= s_1` with `S = 2u`, otherwise S with
    /// `S = s_1`.
    pub fn dominant(&self) -> (DominantKind, usize) {
        if 2 * self.u >= self.max_part() {
            let k = match self.family {
                Family::C => DominantKind::B,
                Family::D => DominantKind::D,
            };
            (k, 2 * self.u)
        } else {
            (DominantKind::S, self.max_part())
        }
    }

    fn is(&self, u: usize, v: usize, parts: &[usize]) -> bool {
        self.u == u && self.v == v && self.parts == parts
    }
}

/// `Σ S_{x_i} <= 2n(L-1)`.
pub fn cd_eligibility(tuple: &[CDElement]) -> Result<EligibilityVerdict> {
    let first = tuple.first().ok_or(Error::EmptyTuple)?;
    if tuple.iter().any(|x| x.family != first.family || x.rank() != first.rank()) {
        return Err(Error::FamilyMismatch);
    }
    let n = first.rank();
    let len = tuple.len();
    let lhs: i64 = tuple.iter().map(|x| x.dominant().1 as i64).sum();
    let rhs = 2 * n as i64 * (len as i64 - 1);
    Ok(EligibilityVerdict {
        eligible: len >= 2 && lhs <= rhs,
        case: EligibilityCase::NotApplicable,
        parity: Parity::Even,
        lhs,
        rhs,
        rank: n,
        len,
        dropped_central: 0,
    })
}

/// The three families of exceptional pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExceptionalClause {
    /// Type `C_{n/2} × C_{n/2}` paired with itself or with `SU(n)`.
    HalfHalf,
    /// The C_n pairs entwined under reduction.
    Entwined,
    /// D_n only: `SU(n)` with `SU(n)` or `SU(n-1)`.
    SpecialUnitary,
}

impl ExceptionalClause {
    pub fn label(&self) -> &'static str {
        match self {
            ExceptionalClause::HalfHalf => "i",
            ExceptionalClause::Entwined => "ii",
            ExceptionalClause::SpecialUnitary => "iii",
        }
    }
}

/// Whether the pair is exceptional and under which clause. Symmetric in the
/// pair. "Type `SU(n-1)`" at rank `n` leaves one coordinate whose root
/// system is empty; both completions `(1, e^{ia}^{n-1})` and
/// `(e^{ib}, e^{ia}^{n-1})` are accepted.
pub fn cd_exceptional(x: &CDElement, y: &CDElement) -> Result<Option<ExceptionalClause>> {
    if x.family != y.family || x.rank() != y.rank() {
        return Err(Error::FamilyMismatch);
    }
    Ok(exceptional_ordered(x, y).or_else(|| exceptional_ordered(y, x)))
}

fn exceptional_ordered(x: &CDElement, y: &CDElement) -> Option<ExceptionalClause> {
    let n = x.rank();
    let su_n = |e: &CDElement| e.is(0, 0, &[n]);
    let su_n_minus_one =
        |e: &CDElement| n >= 2 && (e.is(1, 0, &[n - 1]) || e.is(0, 0, &[n - 1, 1]) || (n == 2 && e.is(0, 0, &[1, 1])));
    if n.is_multiple_of(2) && x.is(n / 2, n / 2, &[]) && (y.is(n / 2, n / 2, &[]) || su_n(y)) {
        return Some(ExceptionalClause::HalfHalf);
    }
    if x.family == Family::C {
        if n.is_multiple_of(2) && n >= 2 && x.is(n / 2, n / 2, &[]) && y.is(n / 2, n / 2 - 1, &[1]) {
            return Some(ExceptionalClause::Entwined);
        }
        if n % 2 == 1 && x.is(n.div_ceil(2), (n - 1) / 2, &[]) && y.is((n - 1) / 2, (n - 1) / 2, &[1]) {
            return Some(ExceptionalClause::Entwined);
        }
    }
    if x.family == Family::D && su_n(x) && (su_n(y) || su_n_minus_one(y)) {
        return Some(ExceptionalClause::SpecialUnitary);
    }
    None
}
