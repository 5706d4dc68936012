//! The integral root subsystem of a weight and its combinatorics.
//!
//! For a non-critical weight `lambda`, the integral roots are the real
//! roots `alpha` with `(alpha^vee, lambda+rho)` an integer. On affine
//! types they organize into arithmetic progressions along delta within
//! each translation class, so the whole (possibly infinite) subsystem is
//! finitely presented and all membership, simplicity and chamber
//! questions are decided symbolically on progression data.

use crate::base::cartan::{CartanData, CartanKind};
use crate::base::root::{is_positive_vec, pairing_unchecked, reflect_vec, Root};
use crate::base::scalar::Scalar;
use crate::base::weight::{solve_affine, solve_linear, Weight};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

/// Height cap for the self-verification of the simple-root search.
pub const DEFAULT_SIMPLE_CAP: i64 = 64;

/// Index range of a progression: all of Z, or an explicit finite set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProgressionRange {
    AllZ,
    Finite(Vec<i64>),
}

/// One delta-arithmetic progression of integral roots:
/// members are `base + k * period * delta` for k in the range.
///
/// For `AllZ`, `base` is the minimal positive member, so the positive
/// members are exactly those with `k >= 0`. The pairing against
/// `lambda + rho` along the progression is `base_pairing + k * step`.
#[derive(Debug, Clone)]
pub struct Progression {
    pub base: Root,
    pub period: i64,
    pub range: ProgressionRange,
    pub base_pairing: Scalar,
    pub step: Scalar,
}

impl Progression {
    /// The member at index k.
    pub fn member(&self, cartan: &CartanData, k: i64) -> Root {
        match &cartan.delta_coeffs {
            None => {
                debug_assert_eq!(k, 0);
                self.base.clone()
            }
            Some(delta) => Root {
                coords: (0..cartan.nodes)
                    .map(|i| self.base.coords[i] + k * self.period * delta[i])
                    .collect(),
            },
        }
    }

    pub fn member_pairing(&self, k: i64) -> Scalar {
        self.base_pairing.clone() + &(self.step.clone() * Scalar::from_int(k))
    }

    /// Positive members of height at most `h`, with their k-indices.
    pub fn positive_members_up_to(&self, cartan: &CartanData, h: i64) -> Vec<(i64, Root)> {
        let mut out = vec![];
        match &self.range {
            ProgressionRange::Finite(ks) => {
                for &k in ks {
                    let r = self.member(cartan, k);
                    if r.is_positive() && r.height() <= h {
                        out.push((k, r));
                    }
                }
            }
            ProgressionRange::AllZ => {
                let dh = cartan.delta_height() * self.period;
                let mut k = 0i64;
                loop {
                    let r = self.member(cartan, k);
                    if r.height() > h {
                        break;
                    }
                    out.push((k, r));
                    k += 1;
                    if dh <= 0 {
                        break;
                    }
                }
            }
        }
        out
    }

    /// All members of |height| at most `h`.
    pub fn members_up_to_abs(&self, cartan: &CartanData, h: i64) -> Vec<Root> {
        match &self.range {
            ProgressionRange::Finite(ks) => ks
                .iter()
                .map(|&k| self.member(cartan, k))
                .filter(|r| r.height().abs() <= h)
                .collect(),
            ProgressionRange::AllZ => {
                let mut out = vec![];
                let mut k = 0i64;
                loop {
                    let r = self.member(cartan, k);
                    if r.height() > h {
                        break;
                    }
                    out.push(r);
                    k += 1;
                }
                let mut k = -1i64;
                loop {
                    let r = self.member(cartan, k);
                    if r.height() < -h {
                        break;
                    }
                    out.push(r);
                    k -= 1;
                }
                out
            }
        }
    }

    fn canonical_key(&self) -> (Vec<i64>, i64, Vec<i64>) {
        let ks = match &self.range {
            ProgressionRange::AllZ => vec![],
            ProgressionRange::Finite(ks) => ks.clone(),
        };
        (self.base.coords.clone(), self.period, ks)
    }
}

/// Position of a weight relative to the dominant and antidominant chambers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChamberClass {
    Critical,
    CPlus,
    CMinus,
    Interior,
}

/// The integral root subsystem of a weight, finitely presented.
#[derive(Debug, Clone)]
pub struct IntegralSystem {
    pub cartan: Arc<CartanData>,
    pub lambda: Weight,
    /// `(delta, lambda + rho)`; `Scalar::one()` placeholder on finite types.
    pub level: Scalar,
    /// Nonempty progressions covering the integral roots exactly.
    pub progressions: Vec<Progression>,
    /// Roots with pairing zero (always finite off the critical level).
    pub delta0: Vec<Root>,
    /// Simple roots of the subsystem.
    pub simples: Vec<Root>,
    /// Simple roots of the zero-pairing subsystem.
    pub simples0: Vec<Root>,
    /// Coxeter matrix over `simples`; entry 0 encodes infinity.
    pub coxeter_matrix: Vec<Vec<i64>>,
    /// Whether the subsystem is finite.
    pub finite_flag: bool,
}

/// Compute the integral root subsystem of `lambda`.
pub fn compute_integral_system(lambda: &Weight, cartan: &Arc<CartanData>) -> Result<IntegralSystem> {
    compute_integral_system_with_cap(lambda, cartan, DEFAULT_SIMPLE_CAP)
}

/// As `compute_integral_system`, with an explicit self-verification cap.
pub fn compute_integral_system_with_cap(
    lambda: &Weight,
    cartan: &Arc<CartanData>,
    cap: i64,
) -> Result<IntegralSystem> {
    let lam_rho = lambda.plus_rho(cartan);
    let level = if cartan.is_affine() {
        let l = lam_rho.level(cartan);
        if l.is_zero() {
            return Err(Error::CriticalLevel);
        }
        l
    } else {
        Scalar::one()
    };

    let mut progressions = vec![];
    let mut delta0 = vec![];

    match cartan.kind {
        CartanKind::Finite => {
            for r in &cartan.finite_roots {
                let p = pairing_unchecked(cartan, r, &lam_rho);
                if p.is_integer() {
                    if p.is_zero() {
                        delta0.push(Root { coords: r.clone() });
                    }
                    progressions.push(Progression {
                        base: Root { coords: r.clone() },
                        period: 1,
                        range: ProgressionRange::Finite(vec![0]),
                        base_pairing: p,
                        step: Scalar::zero(),
                    });
                }
            }
        }
        CartanKind::Affine => {
            for cls in &cartan.classes {
                // pairing of tilde + k*r*delta is base + k*step,
                // step = r * (delta, lambda+rho) * 2/(gamma,gamma)
                let base_pairing = pairing_unchecked(cartan, &cls.tilde, &lam_rho);
                let step = level
                    .clone()
                    .scale_rat(&(BigRational::from_integer(BigInt::from(cls.period)) / &cls.norm_half));
                match integral_points(&base_pairing, &step) {
                    IntegralPoints::None => {}
                    IntegralPoints::Single(k) => {
                        let base = Root {
                            coords: (0..cartan.nodes)
                                .map(|i| {
                                    cls.tilde[i] + k * cls.period * cartan.delta_coeffs.as_ref().unwrap()[i]
                                })
                                .collect(),
                        };
                        let p = base_pairing.clone() + &(step.clone() * Scalar::from_int(k));
                        if p.is_zero() {
                            delta0.push(base.clone());
                        }
                        progressions.push(Progression {
                            base,
                            period: cls.period,
                            range: ProgressionRange::Finite(vec![0]),
                            base_pairing: p,
                            step,
                        });
                    }
                    IntegralPoints::Arithmetic { offset, modulus } => {
                        let q = modulus;
                        let base = Root {
                            coords: (0..cartan.nodes)
                                .map(|i| {
                                    cls.tilde[i]
                                        + offset * cls.period * cartan.delta_coeffs.as_ref().unwrap()[i]
                                })
                                .collect(),
                        };
                        debug_assert!(base.is_positive());
                        let base_p = base_pairing.clone() + &(step.clone() * Scalar::from_int(offset));
                        let step_q = step.clone() * Scalar::from_int(q);
                        // zero-pairing member, if any, sits at a single index
                        if let Some(k0) = solve_zero(&base_p, &step_q) {
                            delta0.push(Root {
                                coords: (0..cartan.nodes)
                                    .map(|i| {
                                        base.coords[i]
                                            + k0 * q * cls.period * cartan.delta_coeffs.as_ref().unwrap()[i]
                                    })
                                    .collect(),
                            });
                        }
                        progressions.push(Progression {
                            base,
                            period: q * cls.period,
                            range: ProgressionRange::AllZ,
                            base_pairing: base_p,
                            step: step_q,
                        });
                    }
                }
            }
        }
    }

    progressions.sort_by_key(|p| p.canonical_key());
    delta0.sort();
    let finite_flag = progressions
        .iter()
        .all(|p| matches!(p.range, ProgressionRange::Finite(_)));

    let mut sys = IntegralSystem {
        cartan: cartan.clone(),
        lambda: lambda.clone(),
        level,
        progressions,
        delta0,
        simples: vec![],
        simples0: vec![],
        coxeter_matrix: vec![],
        finite_flag,
    };
    sys.simples = find_simples(&sys);
    verify_simples(&sys, cap)?;
    sys.simples0 = find_simples_of_finite_set(&sys.cartan, &sys.delta0);
    sys.coxeter_matrix = coxeter_matrix(&sys.cartan, &sys.simples);
    Ok(sys)
}

/// Integral points of `base + k*step` over k in Z.
enum IntegralPoints {
    None,
    Single(i64),
    /// k = offset + modulus * Z, with 0 <= offset < modulus.
    Arithmetic {
        offset: i64,
        modulus: i64,
    },
}

fn integral_points(base: &Scalar, step: &Scalar) -> IntegralPoints {
    let (ba, bb) = (base.rational_part(), base.sqrt2_part());
    let (sa, sb) = (step.rational_part(), step.sqrt2_part());
    if !sb.is_zero() {
        // irrational part must cancel: k = -bb/sb, a single candidate
        let k = -bb / sb;
        if !k.is_integer() {
            return IntegralPoints::None;
        }
        let k = k.to_integer().to_i64().expect("small index");
        let val = ba + sa * BigRational::from_integer(BigInt::from(k));
        if val.is_integer() {
            IntegralPoints::Single(k)
        } else {
            IntegralPoints::None
        }
    } else if !bb.is_zero() {
        IntegralPoints::None
    } else {
        // rational progression ba + k*sa with sa != 0 off the critical level
        debug_assert!(!sa.is_zero());
        let q = sa.denom().clone();
        let p = sa.numer().clone();
        // ba + k p/q integral iff q*ba integral and q*ba + k p = 0 mod q
        let qba = ba * BigRational::from_integer(q.clone());
        if !qba.is_integer() {
            return IntegralPoints::None;
        }
        let m = qba.to_integer();
        let (g, inv, _) = extended_gcd(&p.mod_floor(&q), &q);
        debug_assert!(g.is_one(), "step numerator and denominator are coprime");
        let k0 = ((-m * inv).mod_floor(&q)).to_i64().expect("small offset");
        let modulus = q.to_i64().expect("small modulus");
        if modulus == 1 {
            IntegralPoints::Arithmetic { offset: 0, modulus: 1 }
        } else {
            IntegralPoints::Arithmetic { offset: k0, modulus }
        }
    }
}

/// Solve `base + k*step = 0` for integer k.
fn solve_zero(base: &Scalar, step: &Scalar) -> Option<i64> {
    if step.is_zero() {
        return None;
    }
    let k = -base.clone() * step.inv();
    k.to_i64()
}

fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if a.is_zero() {
        (b.clone(), BigInt::zero(), BigInt::one())
    } else {
        let (g, x, y) = extended_gcd(&b.mod_floor(a), a);
        (g, y - (b / a) * &x, x)
    }
}

/// Minimal positive member of each progression; simple roots are found
/// among these (a smaller positive member of the same class would be sent
/// negative by the candidate's reflection).
fn minimal_positive_members(sys: &IntegralSystem) -> Vec<Root> {
    let mut out = vec![];
    for p in &sys.progressions {
        match &p.range {
            ProgressionRange::AllZ => out.push(p.base.clone()),
            ProgressionRange::Finite(ks) => {
                let mut best: Option<Root> = None;
                for &k in ks {
                    let r = p.member(&sys.cartan, k);
                    if r.is_positive() && best.as_ref().map(|b| r.height() < b.height()).unwrap_or(true) {
                        best = Some(r);
                    }
                }
                if let Some(b) = best {
                    out.push(b);
                }
            }
        }
    }
    out
}

/// Does `s_alpha` send every positive member of every progression, other
/// than `alpha` itself, to a positive root? Decided symbolically: along an
/// infinite progression positivity of the image is monotone in the index.
fn reflection_keeps_positives(sys: &IntegralSystem, alpha: &Root) -> bool {
    let cartan = &sys.cartan;
    for p in &sys.progressions {
        match &p.range {
            ProgressionRange::Finite(ks) => {
                for &k in ks {
                    let r = p.member(cartan, k);
                    if !r.is_positive() || r == *alpha {
                        continue;
                    }
                    if !is_positive_vec(&reflect_vec(cartan, &alpha.coords, &r.coords)) {
                        return false;
                    }
                }
            }
            ProgressionRange::AllZ => {
                // image of base + k*q*delta is s(base) + k*q*delta; its height
                // grows with k, so positivity for the minimal relevant k
                // settles the whole tail
                let img0 = reflect_vec(cartan, &alpha.coords, &p.base.coords);
                if p.base == *alpha {
                    let img1 = reflect_vec(cartan, &alpha.coords, &p.member(cartan, 1).coords);
                    if !is_positive_vec(&img1) {
                        return false;
                    }
                } else if !is_positive_vec(&img0) {
                    return false;
                }
            }
        }
    }
    true
}

fn find_simples(sys: &IntegralSystem) -> Vec<Root> {
    let mut simples: Vec<Root> = minimal_positive_members(sys)
        .into_iter()
        .filter(|alpha| reflection_keeps_positives(sys, alpha))
        .collect();
    // height first, then reverse-lexicographic so that at lambda = 0 the
    // ambient simple roots come out in node order
    simples.sort_by(|x, y| x.height().cmp(&y.height()).then(y.coords.cmp(&x.coords)));
    simples
}

/// Self-verification of the simple-root search: every positive integral
/// root up to the height floor must be a nonnegative integer combination
/// of the simples found. The floor is
/// `2 * max height of simples + max period * height(delta)`.
fn verify_simples(sys: &IntegralSystem, cap: i64) -> Result<()> {
    if sys.progressions.is_empty() {
        return Ok(());
    }
    let max_simple_ht = sys.simples.iter().map(Root::height).max().unwrap_or(0);
    let max_period = sys.progressions.iter().map(|p| p.period).max().unwrap_or(1);
    let floor = match sys.cartan.kind {
        CartanKind::Affine => 2 * max_simple_ht + max_period * sys.cartan.delta_height(),
        CartanKind::Finite => sys
            .cartan
            .finite_roots
            .iter()
            .map(|r| r.iter().sum::<i64>())
            .max()
            .unwrap_or(0),
    };
    if floor > cap {
        return Err(Error::BoundExceeded(cap));
    }
    let mut memo: HashMap<Vec<i64>, bool> = HashMap::new();
    for root in sys.positive_integral_roots_up_to(floor) {
        if !decomposes(&root.coords, &sys.simples, &mut memo) {
            return Err(Error::BoundExceeded(cap));
        }
    }
    Ok(())
}

/// Is v a nonnegative integer combination of the given roots?
fn decomposes(v: &[i64], simples: &[Root], memo: &mut HashMap<Vec<i64>, bool>) -> bool {
    if v.iter().all(|&x| x == 0) {
        return true;
    }
    if let Some(&r) = memo.get(v) {
        return r;
    }
    let mut ok = false;
    for s in simples {
        if s.coords.iter().zip(v).all(|(a, b)| b >= a) {
            let rest: Vec<i64> = v.iter().zip(&s.coords).map(|(b, a)| b - a).collect();
            if decomposes(&rest, simples, memo) {
                ok = true;
                break;
            }
        }
    }
    memo.insert(v.to_vec(), ok);
    ok
}

/// Simple roots of a finite subsystem given by an explicit root list.
fn find_simples_of_finite_set(cartan: &CartanData, roots: &[Root]) -> Vec<Root> {
    let positives: Vec<&Root> = roots.iter().filter(|r| r.is_positive()).collect();
    let mut out = vec![];
    'cand: for alpha in &positives {
        for beta in &positives {
            if beta == alpha {
                continue;
            }
            if !is_positive_vec(&reflect_vec(cartan, &alpha.coords, &beta.coords)) {
                continue 'cand;
            }
        }
        out.push((*alpha).clone());
    }
    out.sort_by(|x, y| x.height().cmp(&y.height()).then(y.coords.cmp(&x.coords)));
    out
}

/// Coxeter matrix entries from pairing products:
/// `n = <alpha^vee, beta><beta^vee, alpha>` in {0,1,2,3} maps to m in
/// {2,3,4,6}; n >= 4 means infinite order, encoded as 0.
fn coxeter_matrix(cartan: &CartanData, simples: &[Root]) -> Vec<Vec<i64>> {
    let k = simples.len();
    let mut m = vec![vec![1i64; k]; k];
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let n = cartan.coroot_pairing(&simples[i].coords, &simples[j].coords)
                * cartan.coroot_pairing(&simples[j].coords, &simples[i].coords);
            m[i][j] = match n {
                0 => 2,
                1 => 3,
                2 => 4,
                3 => 6,
                _ => 0,
            };
        }
    }
    m
}

impl IntegralSystem {
    /// `(alpha^vee, lambda + rho)` for any real root.
    pub fn pairing_lambda_rho(&self, alpha: &Root) -> Scalar {
        pairing_unchecked(&self.cartan, &alpha.coords, &self.lambda.plus_rho(&self.cartan))
    }

    /// Is the vector an integral root?
    pub fn contains(&self, v: &[i64]) -> bool {
        self.cartan.is_real_root(v)
            && pairing_unchecked(&self.cartan, v, &self.lambda.plus_rho(&self.cartan)).is_integer()
    }

    /// Positive integral roots of height at most h.
    pub fn positive_integral_roots_up_to(&self, h: i64) -> Vec<Root> {
        let mut out = vec![];
        for p in &self.progressions {
            for (_, r) in p.positive_members_up_to(&self.cartan, h) {
                out.push(r);
            }
        }
        out.sort_by_key(|r| (r.height(), r.coords.clone()));
        out
    }

    /// All integral roots with |height| at most h.
    pub fn members_up_to_abs(&self, h: i64) -> Vec<Root> {
        let mut out = vec![];
        for p in &self.progressions {
            out.extend(p.members_up_to_abs(&self.cartan, h));
        }
        out.sort_by_key(|r| (r.height(), r.coords.clone()));
        out
    }

    /// Set equality of integral root systems (progression data is canonical).
    pub fn same_system(&self, other: &IntegralSystem) -> bool {
        self.cartan.type_str == other.cartan.type_str
            && self.progressions.len() == other.progressions.len()
            && self
                .progressions
                .iter()
                .zip(&other.progressions)
                .all(|(a, b)| a.canonical_key() == b.canonical_key())
    }

    pub fn same_delta0(&self, other: &IntegralSystem) -> bool {
        self.delta0 == other.delta0
    }

    /// JSON form: progressions, simples, Coxeter matrix (0 encodes infinity).
    pub fn to_json(&self) -> serde_json::Value {
        let progs: Vec<_> = self
            .progressions
            .iter()
            .map(|p| {
                serde_json::json!({
                    "base": p.base.coords,
                    "period": p.period,
                    "range": match &p.range {
                        ProgressionRange::AllZ => serde_json::json!("all"),
                        ProgressionRange::Finite(ks) => serde_json::json!(ks),
                    },
                })
            })
            .collect();
        serde_json::json!({
            "lambda": self.lambda.format(),
            "progressions": progs,
            "delta0": self.delta0.iter().map(|r| r.coords.clone()).collect::<Vec<_>>(),
            "simples": self.simples.iter().map(|r| r.coords.clone()).collect::<Vec<_>>(),
            "simples0": self.simples0.iter().map(|r| r.coords.clone()).collect::<Vec<_>>(),
            "coxeter_matrix": self.coxeter_matrix,
            "finite": self.finite_flag,
        })
    }
}

/// Classify the chamber of the system's weight from base/step signs alone.
pub fn classify_chamber(sys: &IntegralSystem) -> ChamberClass {
    if sys.cartan.is_affine() && sys.lambda.plus_rho(&sys.cartan).level(&sys.cartan).is_zero() {
        return ChamberClass::Critical;
    }
    let mut has_negative = false;
    let mut has_positive = false;
    for p in &sys.progressions {
        match &p.range {
            ProgressionRange::Finite(ks) => {
                for &k in ks {
                    if !p.member(&sys.cartan, k).is_positive() {
                        continue;
                    }
                    match p.member_pairing(k).signum() {
                        1 => has_positive = true,
                        -1 => has_negative = true,
                        _ => {}
                    }
                }
            }
            ProgressionRange::AllZ => {
                // positive members are k >= 0 with pairing base + k*step
                if p.base_pairing.signum() < 0 || p.step.signum() < 0 {
                    has_negative = true;
                }
                if p.base_pairing.signum() > 0 || p.step.signum() > 0 {
                    has_positive = true;
                }
            }
        }
    }
    if !has_negative {
        ChamberClass::CPlus
    } else if !has_positive {
        ChamberClass::CMinus
    } else {
        ChamberClass::Interior
    }
}

/// The unique representative of the orbit in the dominant (or antidominant)
/// chamber, together with the word `w` over simple-reflection indices such
/// that `mu = w o lambda` (letters act right to left).
///
/// Rational positive level targets the dominant chamber, rational negative
/// level the antidominant chamber; at irrational level both exist and the
/// dominant one is returned.
pub fn dominant_representative(sys: &IntegralSystem) -> Result<(Weight, Vec<usize>)> {
    if sys.cartan.is_affine() && sys.level.is_zero() {
        return Err(Error::CriticalLevel);
    }
    let target_plus = if sys.level.is_rational() {
        sys.level.signum() > 0 || !sys.cartan.is_affine()
    } else {
        true
    };
    let cartan = &sys.cartan;
    let mut current = sys.lambda.plus_rho(cartan);
    let mut word: Vec<usize> = vec![];
    let mut guard = 0usize;
    loop {
        let mut moved = false;
        for (i, alpha) in sys.simples.iter().enumerate() {
            let p = pairing_unchecked(cartan, &alpha.coords, &current);
            let bad = if target_plus { p.signum() < 0 } else { p.signum() > 0 };
            if bad {
                current = current.add_root(cartan, &alpha.coords, &(-p));
                word.insert(0, i);
                moved = true;
                break;
            }
        }
        if !moved {
            break;
        }
        guard += 1;
        assert!(guard < 1_000_000, "dominance recursion out of control");
    }
    Ok((current.sub(&Weight::rho(cartan)), word))
}

/// Which set to conjugate into a standard parabolic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParabolicTarget {
    /// The whole integral system (must be finite).
    FullSystem,
    /// The zero-pairing part (always finite off the critical level).
    ZeroPart,
}

/// Find `x` in the ambient Weyl group (as a word over the ambient simple
/// reflections, letters acting right to left) and a proper subset `J` of
/// the nodes with `x . Delta(lambda)` (resp. `x . Delta_0(lambda)`) inside
/// the standard parabolic subsystem on `J`.
///
/// The construction is greedy dominance of an exact witness vector: a
/// lexicographic pair of coordinate vectors whose pairing separates the
/// conjugated set from the rest, reflected at the lowest negative node
/// until dominant. For the zero-part target the result additionally
/// satisfies `x . Delta^+(lambda) subset Delta^+` and
/// `x . Delta_0(lambda) = Delta_J`.
pub fn conjugate_to_parabolic(
    sys: &IntegralSystem,
    target: ParabolicTarget,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let cartan = &sys.cartan;
    if !cartan.is_affine() {
        return Err(Error::Unsupported(
            "parabolic conjugation is defined against affine ambient data".into(),
        ));
    }
    match target {
        ParabolicTarget::FullSystem => {
            if !sys.finite_flag {
                return Err(Error::NotFinite);
            }
            if sys.progressions.is_empty() {
                return Ok((vec![], vec![]));
            }
            let orth = orthogonal_witness(cartan, &sys.simples)?;
            let (word, j) = dominate_lex(cartan, orth, Weight::zero(cartan));
            Ok((word, j))
        }
        ParabolicTarget::ZeroPart => {
            let chamber = classify_chamber(sys);
            let chi = match chamber {
                ChamberClass::CPlus => 1,
                ChamberClass::CMinus => -1,
                ChamberClass::Critical => return Err(Error::CriticalLevel),
                ChamberClass::Interior => {
                    return Err(Error::PreconditionViolated(
                        "zero-part conjugation needs a dominant or antidominant weight".into(),
                    ))
                }
            };
            let mut signed = sys.lambda.plus_rho(cartan);
            if chi < 0 {
                signed = signed.neg();
            }
            let (first, second) = if sys.finite_flag {
                (orthogonal_witness(cartan, &sys.simples)?, signed)
            } else {
                (signed, orthogonal_witness(cartan, &sys.simples0)?)
            };
            let (mut word, j) = dominate_lex(cartan, first, second);
            // align the image of the positive zero-part with the standard
            // positives of the parabolic
            let mut images: Vec<Vec<i64>> = sys
                .delta0
                .iter()
                .filter(|r| r.is_positive())
                .map(|r| apply_word_vec(cartan, &word, &r.coords))
                .collect();
            let mut guard = 0usize;
            loop {
                let Some(&jneg) = j
                    .iter()
                    .find(|&&jj| images.iter().any(|v| v.iter().enumerate().all(|(i, &x)| x == -i64::from(i == jj))))
                else {
                    break;
                };
                let mut alpha = vec![0i64; cartan.nodes];
                alpha[jneg] = 1;
                for v in images.iter_mut() {
                    *v = reflect_vec(cartan, &alpha, v);
                }
                word.insert(0, jneg);
                guard += 1;
                assert!(guard < 10_000, "parabolic alignment out of control");
            }
            debug_assert!(images.iter().all(|v| is_positive_vec(v)));
            Ok((word, j))
        }
    }
}

/// Exact rational vector orthogonal to the given roots with `(delta, .) = 1`.
fn orthogonal_witness(cartan: &CartanData, roots: &[Root]) -> Result<Weight> {
    let n = cartan.nodes;
    let mut rows: Vec<Vec<Scalar>> = vec![];
    let mut rhs: Vec<Scalar> = vec![];
    for r in roots {
        // (r, mu) = sum_i r_i d_i u_i
        rows.push(
            (0..n)
                .map(|i| {
                    Scalar::from_rational(&cartan.d[i] * BigRational::from_integer(BigInt::from(r.coords[i])))
                })
                .collect(),
        );
        rhs.push(Scalar::zero());
    }
    let c = cartan.c_coeffs.as_ref().expect("affine witness");
    rows.push((0..n).map(|i| Scalar::from_int(c[i])).collect());
    rhs.push(Scalar::one());
    let sol = solve_linear(&mut rows, &mut rhs, n).ok_or_else(|| {
        Error::PreconditionViolated("delta lies in the span of the conjugated set".into())
    })?;
    Ok(Weight::new(sol, Some(Scalar::zero())))
}

/// Greedy dominance of a lexicographic witness pair. Returns the word (letters
/// acting right to left) and the sorted set J of nodes where both pairings
/// vanish.
fn dominate_lex(cartan: &CartanData, mut first: Weight, mut second: Weight) -> (Vec<usize>, Vec<usize>) {
    let lex_sign = |first: &Weight, second: &Weight, i: usize| -> i32 {
        // sign of ((alpha_i, first), (alpha_i, second)) lexicographically;
        // (alpha_i, w) has the sign of <h_i, w> since d_i > 0
        let s1 = first.h[i].signum();
        if s1 != 0 {
            s1
        } else {
            second.h[i].signum()
        }
    };
    let mut word = vec![];
    let mut guard = 0usize;
    loop {
        let Some(i) = (0..cartan.nodes).find(|&i| lex_sign(&first, &second, i) < 0) else {
            break;
        };
        let mut alpha = vec![0i64; cartan.nodes];
        alpha[i] = 1;
        let p1 = first.h[i].clone();
        first = first.add_root(cartan, &alpha, &(-p1));
        let p2 = second.h[i].clone();
        second = second.add_root(cartan, &alpha, &(-p2));
        word.insert(0, i);
        guard += 1;
        assert!(guard < 1_000_000, "witness dominance out of control");
    }
    let j: Vec<usize> = (0..cartan.nodes)
        .filter(|&i| first.h[i].is_zero() && second.h[i].is_zero())
        .collect();
    (word, j)
}

/// Apply a word of ambient simple reflections (letters right to left) to a
/// root-lattice vector.
pub fn apply_word_vec(cartan: &CartanData, word: &[usize], v: &[i64]) -> Vec<i64> {
    let mut out = v.to_vec();
    for &i in word.iter().rev() {
        let mut alpha = vec![0i64; cartan.nodes];
        alpha[i] = 1;
        out = reflect_vec(cartan, &alpha, &out);
    }
    out
}

/// Replace an irrational-coordinate weight by a rational one with the same
/// integral system, the same level and the same integral pairings. Requires
/// the system to be infinite (so delta lies in the rational span of the
/// integral roots); verification is by recomputation.
pub fn rationalize_weight(sys: &IntegralSystem) -> Result<Weight> {
    if sys.finite_flag {
        return Err(Error::NotApplicable(
            "integral system is finite; rationalization is for systems spanning delta".into(),
        ));
    }
    if sys.lambda.is_rational() {
        return Ok(sys.lambda.clone());
    }
    let cartan = &sys.cartan;
    let n = cartan.nodes;
    let lam_rho = sys.lambda.plus_rho(cartan);

    // pin the coroot pairings on the simples (hence on the whole system)
    let mut rows: Vec<Vec<Scalar>> = vec![];
    let mut rhs: Vec<Scalar> = vec![];
    for pi in &sys.simples {
        let norm_half = cartan.norm_half(&pi.coords);
        rows.push(
            (0..n)
                .map(|i| {
                    Scalar::from_rational(
                        &cartan.d[i] * BigRational::from_integer(BigInt::from(pi.coords[i])) / &norm_half,
                    )
                })
                .collect(),
        );
        let target = pairing_unchecked(cartan, &pi.coords, &lam_rho);
        debug_assert!(target.is_integer());
        rhs.push(target);
    }
    let (particular, basis) = solve_affine(&rows, &rhs, n)
        .ok_or_else(|| Error::PreconditionViolated("inconsistent pairing system".into()))?;

    // the rational system has rational solutions; scrub any sqrt2 residue
    let rational_u = |u: &[Scalar]| u.iter().all(Scalar::is_rational);
    if !rational_u(&particular) {
        return Err(Error::PreconditionViolated(
            "pairing system has no rational particular solution".into(),
        ));
    }

    let make_candidate = |coeffs: &[(usize, BigRational)]| -> Weight {
        let mut u = particular.clone();
        for (j, c) in coeffs {
            for i in 0..n {
                u[i] = u[i].clone() + basis[*j][i].clone().scale_rat(c);
            }
        }
        let mu_rho = Weight::new(u, Some(Scalar::zero()));
        mu_rho.sub(&Weight::rho(cartan))
    };

    let verify = |mu: &Weight| -> bool {
        if !mu.is_rational() {
            return false;
        }
        let Ok(other) = compute_integral_system(mu, cartan) else {
            return false;
        };
        if !sys.same_system(&other) || !sys.same_delta0(&other) {
            return false;
        }
        let mu_rho = mu.plus_rho(cartan);
        if mu_rho.level(cartan) != sys.level {
            return false;
        }
        sys.simples
            .iter()
            .all(|p| pairing_unchecked(cartan, &p.coords, &mu_rho) == pairing_unchecked(cartan, &p.coords, &lam_rho))
    };

    // bounded search over rational translates in the solution space
    let mut shifts: Vec<Vec<(usize, BigRational)>> = vec![vec![]];
    let denoms = [1i64, 2, 3, 5, 7, 11, 13];
    for &q in &denoms {
        for p in 1..=(2 * q) {
            for sign in [1i64, -1] {
                let c = BigRational::new(BigInt::from(sign * p), BigInt::from(q));
                for j in 0..basis.len() {
                    shifts.push(vec![(j, c.clone())]);
                }
                for j in 0..basis.len() {
                    for k in (j + 1)..basis.len() {
                        shifts.push(vec![(j, c.clone()), (k, c.clone())]);
                    }
                }
            }
        }
    }
    for shift in &shifts {
        let mu = make_candidate(shift);
        if verify(&mu) {
            return Ok(mu);
        }
    }
    Err(Error::BudgetExceeded(
        "no rational representative found within the search grid".into(),
    ))
}

/// Kac-Kazhdan linkage: is there a chain
/// `lambda = lambda_0, lambda_k = lambda_{k-1} - n_k beta_k, lambda_l = mu`
/// with positive real roots `beta_k` and positive integers
/// `n_k = (beta_k^vee, lambda_{k-1} + rho)`? Imaginary steps are impossible
/// off the critical level: `(beta, beta) = 0` would force
/// `2(beta, lambda+rho) = k (delta, lambda+rho) = 0`.
pub fn kk_linked(
    lambda: &Weight,
    mu: &Weight,
    height_bound: i64,
    cartan: &Arc<CartanData>,
) -> Result<bool> {
    if cartan.is_affine() {
        if lambda.plus_rho(cartan).level(cartan).is_zero() || mu.plus_rho(cartan).level(cartan).is_zero() {
            return Err(Error::CriticalLevel);
        }
    }
    let Some(diff) = lambda.diff_as_root(cartan, mu) else {
        return Ok(false);
    };
    if diff.iter().any(|&x| x < 0) || diff.iter().sum::<i64>() > height_bound {
        return Ok(false);
    }
    fn search(
        cartan: &CartanData,
        current: &Weight,
        remaining: &[i64],
        failed: &mut HashSet<Weight>,
    ) -> bool {
        if remaining.iter().all(|&x| x == 0) {
            return true;
        }
        if failed.contains(current) {
            return false;
        }
        let budget: i64 = remaining.iter().sum();
        let cur_rho = current.plus_rho(cartan);
        for beta in cartan.positive_real_roots_up_to(budget) {
            let p = pairing_unchecked(cartan, &beta, &cur_rho);
            let Some(nk) = p.to_i64() else { continue };
            if nk <= 0 {
                continue;
            }
            let step: Vec<i64> = beta.iter().map(|&x| x * nk).collect();
            if step.iter().zip(remaining).any(|(s, r)| s > r) {
                continue;
            }
            let next = current.add_root(cartan, &beta, &Scalar::from_int(-nk));
            let next_remaining: Vec<i64> = remaining.iter().zip(&step).map(|(r, s)| r - s).collect();
            if search(cartan, &next, &next_remaining, failed) {
                return true;
            }
        }
        failed.insert(current.clone());
        false
    }
    let mut failed: HashSet<Weight> = HashSet::new();
    Ok(search(cartan, lambda, &diff, &mut failed))
}

/// Nonnegative rational coefficients expressing delta over the simples, if
/// any; exact cone membership by phase-1 simplex.
pub fn delta_in_simple_cone(sys: &IntegralSystem) -> Option<Vec<BigRational>> {
    let delta = sys.cartan.delta_coeffs.as_ref()?;
    let a: Vec<Vec<BigRational>> = (0..sys.cartan.nodes)
        .map(|i| {
            sys.simples
                .iter()
                .map(|s| BigRational::from_integer(BigInt::from(s.coords[i])))
                .collect()
        })
        .collect();
    let b: Vec<BigRational> = delta
        .iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect();
    crate::simplex::nonnegative_solution(&a, &b)
}

/// Members of the zero-pairing subsystem as a set, for stabilizer checks.
pub fn delta0_set(sys: &IntegralSystem) -> BTreeSet<Vec<i64>> {
    sys.delta0.iter().map(|r| r.coords.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::cartan::CartanData;
    use num_traits::Signed;

    fn a1aff() -> Arc<CartanData> {
        Arc::new(CartanData::from_type("A1~").unwrap())
    }

    fn weight(c: &Arc<CartanData>, text: &str) -> Weight {
        Weight::parse(c, text).unwrap()
    }

    /// lambda with given pairings of lambda+rho.
    fn from_lam_rho(c: &Arc<CartanData>, h: &[Scalar]) -> Weight {
        Weight::new(h.to_vec(), Some(Scalar::zero())).sub(&Weight::rho(c))
    }

    #[test]
    fn critical_level_rejected() {
        let c = a1aff();
        let lam = weight(&c, "h0=-1,h1=-1,d=0");
        assert_eq!(
            compute_integral_system(&lam, &c).unwrap_err(),
            Error::CriticalLevel
        );
    }

    #[test]
    fn empty_system_for_generic_half() {
        let c = a1aff();
        let lam = from_lam_rho(&c, &[Scalar::from_frac(1, 2), Scalar::from_frac(1, 2)]);
        let sys = compute_integral_system(&lam, &c).unwrap();
        assert!(sys.progressions.is_empty());
        assert!(sys.simples.is_empty());
        assert!(sys.finite_flag);
    }

    #[test]
    fn full_system_at_zero() {
        let c = a1aff();
        let lam = Weight::zero(&c);
        let sys = compute_integral_system(&lam, &c).unwrap();
        assert_eq!(sys.simples.len(), 2);
        assert_eq!(sys.simples[0].coords, vec![1, 0]);
        assert_eq!(sys.simples[1].coords, vec![0, 1]);
        assert_eq!(sys.coxeter_matrix[0][1], 0); // infinite order
        assert!(!sys.finite_flag);
        assert!(sys.delta0.is_empty());
    }

    #[test]
    fn level_half_singular_system() {
        let c = a1aff();
        let lam = from_lam_rho(&c, &[Scalar::zero(), Scalar::from_frac(1, 2)]);
        let sys = compute_integral_system(&lam, &c).unwrap();
        let simple_coords: Vec<_> = sys.simples.iter().map(|r| r.coords.clone()).collect();
        assert_eq!(simple_coords, vec![vec![1, 0], vec![1, 2]]);
        let d0: Vec<_> = sys.delta0.iter().map(|r| r.coords.clone()).collect();
        assert_eq!(d0, vec![vec![-1, 0], vec![1, 0]]);
        assert!(!sys.finite_flag);
        assert_eq!(sys.coxeter_matrix[0][1], 0);
    }

    #[test]
    fn irrational_level_single_pair() {
        let c = a1aff();
        let lam = from_lam_rho(&c, &[Scalar::one(), Scalar::sqrt2()]);
        let sys = compute_integral_system(&lam, &c).unwrap();
        assert!(sys.finite_flag);
        let mut members: Vec<_> = sys.members_up_to_abs(10).iter().map(|r| r.coords.clone()).collect();
        members.sort();
        assert_eq!(members, vec![vec![-1, 0], vec![1, 0]]);
        assert_eq!(sys.simples.len(), 1);
        assert_eq!(sys.simples[0].coords, vec![1, 0]);
    }

    #[test]
    fn chamber_classification() {
        let c = a1aff();
        let zero = Weight::zero(&c);
        let sys = compute_integral_system(&zero, &c).unwrap();
        assert_eq!(classify_chamber(&sys), ChamberClass::CPlus);

        let minus2rho = weight(&c, "h0=-2,h1=-2,d=0");
        let sys = compute_integral_system(&minus2rho, &c).unwrap();
        assert_eq!(classify_chamber(&sys), ChamberClass::CMinus);

        // s_0 o (-2 rho) has mixed signs
        let mixed = from_lam_rho(&c, &[Scalar::one(), Scalar::from_int(-3)]);
        let sys = compute_integral_system(&mixed, &c).unwrap();
        assert_eq!(classify_chamber(&sys), ChamberClass::Interior);
    }

    #[test]
    fn dominant_representative_examples() {
        let c = a1aff();
        let zero = Weight::zero(&c);
        let sys = compute_integral_system(&zero, &c).unwrap();
        let (mu, w) = dominant_representative(&sys).unwrap();
        assert_eq!(mu, zero);
        assert!(w.is_empty());

        // s_1 o 0 = -alpha_1 comes back in one step
        let lam = zero.add_root(&c, &[0, 1], &Scalar::from_int(-1));
        let sys = compute_integral_system(&lam, &c).unwrap();
        let (mu, w) = dominant_representative(&sys).unwrap();
        assert_eq!(mu, zero);
        assert_eq!(w.len(), 1);
        assert_eq!(sys.simples[w[0]].coords, vec![0, 1]);
    }

    #[test]
    fn dominant_representative_antidominant_target() {
        let c = a1aff();
        let minus2rho = weight(&c, "h0=-2,h1=-2,d=0");
        // s_0 o (-2 rho) = -2 rho + alpha_0
        let lam = minus2rho.add_root(&c, &[1, 0], &Scalar::one());
        let sys = compute_integral_system(&lam, &c).unwrap();
        let (mu, w) = dominant_representative(&sys).unwrap();
        assert_eq!(mu, minus2rho);
        assert_eq!(w.len(), 1);
        assert_eq!(sys.simples[w[0]].coords, vec![1, 0]);

        // -2 rho - alpha_0 = s_1 o (-2 rho - delta): one step through s_1,
        // landing on the antidominant weight -2 rho - delta
        let lam = minus2rho.add_root(&c, &[1, 0], &Scalar::from_int(-1));
        let sys = compute_integral_system(&lam, &c).unwrap();
        let (mu, w) = dominant_representative(&sys).unwrap();
        let minus2rho_delta = minus2rho.add_root(&c, &[1, 1], &Scalar::from_int(-1));
        assert_eq!(mu, minus2rho_delta);
        assert_eq!(w.len(), 1);
        assert_eq!(sys.simples[w[0]].coords, vec![0, 1]);
        // consistency: applying s_1 back recovers lambda
        let back = crate::base::root::shifted_action(
            &c,
            std::slice::from_ref(&sys.simples[w[0]]),
            &mu,
        )
        .unwrap();
        assert_eq!(back, lam);
    }

    #[test]
    fn parabolic_conjugation_examples() {
        let c = a1aff();
        // empty system
        let lam = from_lam_rho(&c, &[Scalar::from_frac(1, 2), Scalar::from_frac(1, 2)]);
        let sys = compute_integral_system(&lam, &c).unwrap();
        assert_eq!(
            conjugate_to_parabolic(&sys, ParabolicTarget::FullSystem).unwrap(),
            (vec![], vec![])
        );

        // {±alpha_0}: already parabolic
        let lam = from_lam_rho(&c, &[Scalar::one(), Scalar::sqrt2()]);
        let sys = compute_integral_system(&lam, &c).unwrap();
        let (x, j) = conjugate_to_parabolic(&sys, ParabolicTarget::FullSystem).unwrap();
        assert!(x.is_empty());
        assert_eq!(j, vec![0]);

        // {±(alpha_1 + delta)} conjugates into a node: level sqrt2, the
        // alpha_1-class hits an integer pairing only at alpha_1 + delta
        let lam = from_lam_rho(
            &c,
            &[
                Scalar::sqrt2() + Scalar::sqrt2() - Scalar::one(),
                Scalar::one() - Scalar::sqrt2(),
            ],
        );
        let sys = compute_integral_system(&lam, &c).unwrap();
        let members: Vec<_> = sys.members_up_to_abs(10);
        assert_eq!(members.len(), 2);
        let (x, j) = conjugate_to_parabolic(&sys, ParabolicTarget::FullSystem).unwrap();
        assert_eq!(j.len(), 1);
        for m in &members {
            let img = apply_word_vec(&c, &x, &m.coords);
            let nz: Vec<usize> = (0..2).filter(|&i| img[i] != 0).collect();
            assert_eq!(nz, j);
        }
        // infinite system refuses
        let sys = compute_integral_system(&Weight::zero(&c), &c).unwrap();
        assert_eq!(
            conjugate_to_parabolic(&sys, ParabolicTarget::FullSystem).unwrap_err(),
            Error::NotFinite
        );
    }

    #[test]
    fn zero_part_conjugation_postconditions() {
        let c = a1aff();
        let lam = from_lam_rho(&c, &[Scalar::zero(), Scalar::from_frac(1, 2)]);
        let sys = compute_integral_system(&lam, &c).unwrap();
        let (x, j) = conjugate_to_parabolic(&sys, ParabolicTarget::ZeroPart).unwrap();
        // x Delta_0 = Delta_J
        let mut img: Vec<Vec<i64>> = sys
            .delta0
            .iter()
            .map(|r| apply_word_vec(&c, &x, &r.coords))
            .collect();
        img.sort();
        let mut expected: Vec<Vec<i64>> = vec![];
        for &jj in &j {
            let mut v = vec![0i64; 2];
            v[jj] = 1;
            expected.push(v.clone());
            expected.push(v.iter().map(|x| -x).collect());
        }
        expected.sort();
        assert_eq!(img, expected);
        // x Delta^+(lambda) stays positive (sampled)
        for r in sys.positive_integral_roots_up_to(9) {
            assert!(is_positive_vec(&apply_word_vec(&c, &x, &r.coords)));
        }
    }

    #[test]
    fn finiteness_dichotomy() {
        let c = a1aff();
        for (h0, h1) in [
            (Scalar::zero(), Scalar::from_frac(1, 2)),
            (Scalar::one(), Scalar::one()),
            (Scalar::from_frac(-1, 2), Scalar::from_frac(-1, 4)),
        ] {
            let lam = from_lam_rho(&c, &[h0, h1]);
            let sys = compute_integral_system(&lam, &c).unwrap();
            if !sys.progressions.is_empty() {
                assert_eq!(sys.finite_flag, !sys.level.is_rational());
            }
        }
        let lam = from_lam_rho(&c, &[Scalar::one(), Scalar::sqrt2()]);
        let sys = compute_integral_system(&lam, &c).unwrap();
        assert!(sys.finite_flag && !sys.level.is_rational());
    }

    #[test]
    fn delta_cone_when_infinite() {
        let c = a1aff();
        let lam = from_lam_rho(&c, &[Scalar::zero(), Scalar::from_frac(1, 2)]);
        let sys = compute_integral_system(&lam, &c).unwrap();
        let coeffs = delta_in_simple_cone(&sys).expect("delta in cone");
        // delta = 1/2 alpha_0-class + 1/2 (alpha_1+delta)-class... verify combination
        let mut acc = vec![BigRational::zero(); 2];
        for (cf, s) in coeffs.iter().zip(&sys.simples) {
            for i in 0..2 {
                acc[i] += cf * BigRational::from_integer(BigInt::from(s.coords[i]));
            }
        }
        let delta: Vec<BigRational> = vec![BigRational::one(), BigRational::one()];
        assert_eq!(acc, delta);
        assert!(coeffs.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn kk_linked_examples() {
        let c = a1aff();
        let zero = Weight::zero(&c);
        assert!(kk_linked(&zero, &zero, 5, &c).unwrap());
        // 0 and s_1 o 0 = -alpha_1
        let lam = zero.add_root(&c, &[0, 1], &Scalar::from_int(-1));
        assert!(kk_linked(&zero, &lam, 5, &c).unwrap());
        assert!(!kk_linked(&lam, &zero, 5, &c).unwrap()); // difference not in Q^+
        // empty integral system: nothing linked
        let generic = from_lam_rho(&c, &[Scalar::from_frac(1, 2), Scalar::from_frac(1, 2)]);
        let below = generic.add_root(&c, &[0, 1], &Scalar::from_int(-1));
        assert!(!kk_linked(&generic, &below, 5, &c).unwrap());
        // critical level rejected
        let crit = weight(&c, "h0=-1,h1=-1,d=0");
        assert_eq!(kk_linked(&crit, &crit, 3, &c).unwrap_err(), Error::CriticalLevel);
    }

    #[test]
    fn rationalize_identity_on_rational() {
        let c = a1aff();
        let lam = from_lam_rho(&c, &[Scalar::zero(), Scalar::from_frac(1, 2)]);
        let sys = compute_integral_system(&lam, &c).unwrap();
        assert_eq!(rationalize_weight(&sys).unwrap(), lam);
        // finite system refuses
        let lam = from_lam_rho(&c, &[Scalar::one(), Scalar::sqrt2()]);
        let sys = compute_integral_system(&lam, &c).unwrap();
        assert!(matches!(rationalize_weight(&sys), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn rationalize_a2_affine_mixed_coordinates() {
        let c = Arc::new(CartanData::from_type("A2~").unwrap());
        // lambda+rho pairings (1/2 + t, 1/2 - t, 1): level 2, the
        // (alpha_1+alpha_2)-classes are integral, the others never are
        let lam_rho = Weight::new(
            vec![
                Scalar::from_frac(1, 2) + Scalar::sqrt2(),
                Scalar::from_frac(1, 2) - Scalar::sqrt2(),
                Scalar::one(),
            ],
            Some(Scalar::zero()),
        );
        let lam = lam_rho.sub(&Weight::rho(&c));
        let sys = compute_integral_system(&lam, &c).unwrap();
        assert!(!sys.finite_flag);
        assert!(!sys.progressions.is_empty());
        let mu = rationalize_weight(&sys).unwrap();
        assert!(mu.is_rational());
        let sys2 = compute_integral_system(&mu, &c).unwrap();
        assert!(sys.same_system(&sys2));
        assert_eq!(sys2.level, sys.level);
    }

    #[test]
    fn subsystem_closure_sampled() {
        let c = a1aff();
        let lam = from_lam_rho(&c, &[Scalar::zero(), Scalar::from_frac(1, 2)]);
        let sys = compute_integral_system(&lam, &c).unwrap();
        let members = sys.members_up_to_abs(12);
        for a in &members {
            for b in &members {
                let img = reflect_vec(&c, &a.coords, &b.coords);
                assert!(sys.contains(&img), "closure fails at {a:?}, {b:?}");
            }
        }
    }
}
