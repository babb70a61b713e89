//! Three-pass normalization of a nondegenerate surface jet.
//!
//! Pass 1 walks degrees T = k0+1 ..= order. At each degree an exact
//! real-linear system in the admissible map monomials of that degree is
//! solved so the degree-T tail part lands in the normalization space; the
//! families z^0 w^n and z^1 w^n of the z-component stay frozen. Pass 2
//! spends the frozen parameters whose designated pure coefficient lies
//! within the order: at each resonant degree a closed-form corrective map
//! is probed, the induced affine dependence of the target coefficient is
//! solved, and the pass-1 conditions are re-imposed. Pass 3 pins the
//! families left over at the truncation boundary, those whose target lies
//! beyond the order but whose action on the jet does not: their parameters
//! are solved by one joint exact least squares so the jet is orthogonal to
//! every motion direction at once. Without pass 3 those parameters are
//! silent gauge freedom and equal surfaces could normalize to jets that
//! differ near the order. Invariants:
//!
//! - probe matrices depend only on the model and the degree, never on the
//!   tail, so they are assembled once per degree and cached
//! - every commit is followed by exact assertions: lower degrees are
//!   bit-identical, the degree's residual is zero, earlier resonance
//!   targets are still zero, boundary projections vanish after the pin
//! - pass-3 pins are canonical: the motion directions depend only on the
//!   model and on degrees the earlier passes have already made unique, and
//!   the pinned jet is the orthogonal projection of the orbit, the same for
//!   every solution of the normal equations
//! - all arithmetic is exact; a failed assertion is an error, not a warning

use crate::error::{Error, Result};
use crate::fischer::FischerContext;
use crate::map::{apply_map, compose_maps_to_order, elementary_map, MapComponent, TangentIdentityMap};
use crate::poly::BiPoly;
use crate::scalar::ExactScalar;
use crate::solve::{Prepared, SolveOutcome};
use crate::surface::{surface_invariants, ModelPolynomial, SurfaceJet};
use crate::wjet::WJet;
use num::{BigRational, Zero};
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

/// The map monomials available at one degree of pass 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeUnknowns {
    /// The degree T the unknowns act on.
    pub degree: u32,
    /// w-component monomials (m, n) with m + k0 n = T, combined degree >= 2.
    pub g_monomials: Vec<(u32, u32)>,
    /// z-component monomials (k, l) with k + k0 l = T - k0 + 1 and k >= 2;
    /// the families k = 0 and k = 1 are reserved for pass 2.
    pub f_monomials: Vec<(u32, u32)>,
}

impl DegreeUnknowns {
    /// Total number of complex unknowns.
    pub fn len(&self) -> usize {
        self.g_monomials.len() + self.f_monomials.len()
    }

    /// True when the degree admits no unknowns (never happens for T > k0).
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Enumerates the pass-1 unknowns at degree `t`.
pub fn degree_unknowns(k0: u32, t: u32) -> Result<DegreeUnknowns> {
    if k0 < 3 {
        return Err(Error::DegreeViolation { k0 });
    }
    if t < k0 + 1 {
        return Err(Error::DegreeOutOfRange(format!(
            "pass-1 degrees start at {}, got {}",
            k0 + 1,
            t
        )));
    }
    let mut g_monomials = Vec::new();
    let mut n = 0;
    while k0 * n <= t {
        let m = t - k0 * n;
        if m + n >= 2 && (m, n) != (0, 1) {
            g_monomials.push((m, n));
        }
        n += 1;
    }
    let tf = t - k0 + 1;
    let mut f_monomials = Vec::new();
    let mut l = 0;
    while k0 * l <= tf {
        let k = tf - k0 * l;
        if k >= 2 {
            f_monomials.push((k, l));
        }
        l += 1;
    }
    Ok(DegreeUnknowns {
        degree: t,
        g_monomials,
        f_monomials,
    })
}

/// Which closed-form corrective family a resonant degree uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResonanceCase {
    /// Target degree t s + k0 - 1: spends the z^0 w^t family.
    A,
    /// Target degree (t + 1) s: spends the z^1 w^t family.
    B,
}

impl fmt::Display for ResonanceCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResonanceCase::A => write!(f, "A"),
            ResonanceCase::B => write!(f, "B"),
        }
    }
}

/// One scheduled resonant degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResonanceEvent {
    /// The zbar-pure coefficient a_{0, degree} this event zeroes.
    pub degree: u32,
    /// Which corrective family applies.
    pub case: ResonanceCase,
    /// Family index: case A targets t s + k0 - 1, case B targets (t + 1) s.
    pub t: u32,
}

/// Ascending list of resonant degrees within the truncation.
pub fn resonance_schedule(k0: u32, s: u32, order: u32) -> Vec<ResonanceEvent> {
    let mut events = Vec::new();
    let mut t = 1;
    while t * s + k0 - 1 <= order {
        events.push(ResonanceEvent {
            degree: t * s + k0 - 1,
            case: ResonanceCase::A,
            t,
        });
        t += 1;
    }
    let mut k = 2 * s;
    while k <= order {
        events.push(ResonanceEvent {
            degree: k,
            case: ResonanceCase::B,
            t: k / s - 1,
        });
        k += s;
    }
    events.sort_by_key(|e| e.degree);
    events
}

/// One corrective family whose designated pure target lies beyond the
/// truncation while its action on the jet does not.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryFamily {
    /// Corrective family.
    pub case: ResonanceCase,
    /// Family index.
    pub t: u32,
    /// Lowest degree the family can move: k0 (t + 1) - 1 for case A,
    /// k0 (t + 1) for case B.
    pub first_degree: u32,
    /// The out-of-range degree a longer jet would zero instead.
    pub target_degree: u32,
}

/// Families with in-range action but out-of-range targets, ascending by
/// first action degree.
///
/// These are exactly the corrective families pass 2 cannot spend: their
/// target coefficient does not exist within the truncation, yet they move
/// in-range coefficients, so leaving them free would make the computed
/// normal form depend on the presentation of the input.
pub fn boundary_families(k0: u32, s: u32, order: u32) -> Vec<BoundaryFamily> {
    let mut families = Vec::new();
    let mut t = 1;
    while k0 * (t + 1) - 1 <= order {
        if t * s + k0 - 1 > order {
            families.push(BoundaryFamily {
                case: ResonanceCase::A,
                t,
                first_degree: k0 * (t + 1) - 1,
                target_degree: t * s + k0 - 1,
            });
        }
        t += 1;
    }
    let mut t = 1;
    while k0 * (t + 1) <= order {
        if (t + 1) * s > order {
            families.push(BoundaryFamily {
                case: ResonanceCase::B,
                t,
                first_degree: k0 * (t + 1),
                target_degree: (t + 1) * s,
            });
        }
        t += 1;
    }
    families.sort_by_key(|f| f.first_degree);
    families
}

/// The closed-form corrective map spending one frozen parameter.
///
/// Case A: f = a alpha w^t - a z^k0 w^(t-1), g = 0.
/// Case B: f = a z w^t, g = (alpha a + conj(alpha a)) w^(t+1).
pub fn corrective_map(
    case: ResonanceCase,
    k0: u32,
    t: u32,
    alpha: &ExactScalar,
    a: &ExactScalar,
) -> Result<TangentIdentityMap> {
    if t < 1 {
        return Err(Error::DegreeOutOfRange(
            "resonance family index must be at least 1".into(),
        ));
    }
    if a.is_zero() {
        return Ok(TangentIdentityMap::identity(k0));
    }
    let (f, g) = match case {
        ResonanceCase::A => {
            let mut f = WJet::zero();
            f.add_to_coeff(0, t, &(a * alpha));
            f.add_to_coeff(k0, t - 1, &-a);
            (f, WJet::zero())
        }
        ResonanceCase::B => {
            let f = WJet::monomial(1, t, a.clone());
            let aa = alpha * a;
            let g = WJet::monomial(0, t + 1, &aa + &aa.conj());
            (f, g)
        }
    };
    TangentIdentityMap::new(k0, f, g)
}

/// Pass-1 bookkeeping for one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeRecord {
    /// The degree this record describes.
    pub degree: u32,
    /// Number of w-component unknowns.
    pub g_unknowns: usize,
    /// Number of z-component unknowns.
    pub f_unknowns: usize,
    /// True when the degree was already in the normalization space.
    pub residual_was_zero: bool,
}

/// Pass-2 bookkeeping for one resonance event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonanceRecord {
    /// Target degree.
    pub degree: u32,
    /// Corrective family used.
    pub case: ResonanceCase,
    /// Family index.
    pub t: u32,
    /// Target coefficient before the event.
    pub target_before: ExactScalar,
    /// Solved corrective parameter.
    pub parameter: ExactScalar,
    /// False when the target was already zero and no probes ran.
    pub probed: bool,
    /// The fourth probe matched the affine model exactly.
    pub affine_confirmed: bool,
    /// Lower degrees and earlier targets were bit-identical after commit.
    pub locality_verified: bool,
    /// Closed-form nondegeneracy factor, reported for comparison only.
    pub predicted_factor: ExactScalar,
    /// Measured affine slope: d(target)/d(Re a) and d(target)/d(Im a).
    pub measured_slope: [ExactScalar; 2],
}

/// Pass-3 bookkeeping for one truncation-boundary family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryRecord {
    /// Corrective family.
    pub case: ResonanceCase,
    /// Family index.
    pub t: u32,
    /// Lowest degree the family can move.
    pub first_degree: u32,
    /// The out-of-range degree a longer jet would zero instead.
    pub target_degree: u32,
    /// Solved pinning parameter.
    pub parameter: ExactScalar,
    /// True when the family cannot move any in-range coefficient.
    pub inert: bool,
    /// The fourth probe matched the affine model exactly.
    pub affine_confirmed: bool,
    /// Projections onto the motion directions re-checked zero after commit.
    pub pinned: bool,
    /// Lower degrees and resonance targets were bit-identical after commit.
    pub locality_verified: bool,
}

/// Conventions the algorithm commits to where more than one reading exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conventions {
    /// How the division chain recursion is read.
    pub chain_reading: &'static str,
    /// Which pure coefficient stays unconstrained in the chain conditions.
    pub top_zbar_exclusion: &'static str,
    /// Where the multiple-of-s resonance targets start.
    pub resonance_start: &'static str,
    /// How diagonal scalings act on the conjugate variable.
    pub scaling_reading: &'static str,
}

/// The conventions used by this implementation.
pub fn conventions() -> Conventions {
    Conventions {
        chain_reading: "each chain level divides the previous quotient, so level j is homogeneous of degree N - j*k0",
        top_zbar_exclusion: "the zbar-pure coefficient of the undivided level is not a membership condition; zeroing zbar-pure data is the resonance pass's job",
        resonance_start: "multiple-of-s targets start at 2s; the coefficient at s itself is the leading invariant and is never zeroed",
        scaling_reading: "diagonal scalings substitute lambda z for z and conj(lambda) zbar for zbar",
    }
}

/// Full audit of one normalization run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizeReport {
    /// Singularity degree.
    pub k0: u32,
    /// Truncation order.
    pub order: u32,
    /// Leading zbar-pure invariant.
    pub s: u32,
    /// Model division invariant.
    pub alpha: ExactScalar,
    /// One record per pass-1 degree.
    pub degrees: Vec<DegreeRecord>,
    /// One record per resonance event, ascending.
    pub resonances: Vec<ResonanceRecord>,
    /// One record per truncation-boundary family, ascending by first
    /// action degree.
    pub boundaries: Vec<BoundaryRecord>,
    /// Ambiguity resolutions baked into the run.
    pub conventions: Conventions,
}

/// A normalized surface with the transformation that produced it.
#[derive(Clone, Debug)]
pub struct NormalizationResult {
    /// Composition of every committed map, truncated to the order.
    pub map: TangentIdentityMap,
    /// The normal form.
    pub normal_form: SurfaceJet,
    /// Per-degree and per-resonance audit.
    pub report: NormalizeReport,
}

struct DegreeSystem {
    unknowns: DegreeUnknowns,
    prepared: Prepared<BigRational>,
}

/// Normalization engine for a fixed model and order.
///
/// Owns the per-degree caches: division-chain eliminations (shared with the
/// residual computations) and probe matrices. Single-threaded by design.
pub struct Normalizer {
    model: ModelPolynomial,
    order: u32,
    alpha: ExactScalar,
    ctx: FischerContext,
    systems: RefCell<BTreeMap<u32, Rc<DegreeSystem>>>,
}

struct ResonanceOutcome {
    map: TangentIdentityMap,
    surface: SurfaceJet,
    record: ResonanceRecord,
}

struct BoundaryPass {
    map: TangentIdentityMap,
    surface: SurfaceJet,
    records: Vec<BoundaryRecord>,
}

/// Measured action of one boundary family on the jet.
struct FamilyProbe {
    /// Tail motion per unit of Re(a).
    col_re: BiPoly,
    /// Tail motion per unit of Im(a).
    col_im: BiPoly,
    /// Whether the four-point probe confirmed affine dependence.
    affine: bool,
    /// Whether the family moves the jet at all.
    inert: bool,
}

/// Real inner product of two coefficient tables: the sum over monomials of
/// Re(a) Re(b) + Im(a) Im(b).
fn tail_inner(a: &BiPoly, b: &BiPoly) -> BigRational {
    let mut acc = BigRational::zero();
    for (&(m, n), ca) in a.terms() {
        let cb = b.coeff(m, n);
        if !cb.is_zero() {
            acc += ca.re() * cb.re() + ca.im() * cb.im();
        }
    }
    acc
}

impl Normalizer {
    /// Builds an engine for one model at one truncation order.
    pub fn new(model: ModelPolynomial, order: u32) -> Result<Self> {
        if order < model.k0() + 1 {
            return Err(Error::DegreeOutOfRange(format!(
                "order must be at least {}, got {}",
                model.k0() + 1,
                order
            )));
        }
        let p = model.poly().clone();
        let z_pz = p.derivative_z().shifted(1, 0);
        let alpha = crate::fischer::fischer_decompose(&p, &z_pz)?
            .quotient
            .coeff(0, 0);
        let ctx = FischerContext::new(p)?;
        Ok(Normalizer {
            model,
            order,
            alpha,
            ctx,
            systems: RefCell::new(BTreeMap::new()),
        })
    }

    fn k0(&self) -> u32 {
        self.model.k0()
    }

    /// Number of complex residual entries at degree `t`.
    fn residual_len(&self, t: u32) -> usize {
        2 * (t / self.k0()) as usize + 1
    }

    /// Residual entries of a (possibly zero) degree-`t` tail part.
    fn residual_values(&self, part: &BiPoly, t: u32) -> Result<Vec<ExactScalar>> {
        if part.is_zero() {
            return Ok(vec![ExactScalar::zero(); self.residual_len(t)]);
        }
        Ok(self.ctx.residual(part)?.values())
    }

    /// The cached probe system at degree `t`.
    ///
    /// Columns are assembled by applying each elementary probe map to the
    /// bare model: at degree exactly `t` the action of a weight-matched
    /// probe involves the model alone (tail interactions land strictly
    /// higher), so the matrix is independent of any particular surface.
    fn degree_system(&self, t: u32) -> Result<Rc<DegreeSystem>> {
        if let Some(sys) = self.systems.borrow().get(&t) {
            return Ok(sys.clone());
        }
        let unknowns = degree_unknowns(self.k0(), t)?;
        let base = SurfaceJet::new(self.model.clone(), t, BiPoly::zero())?;
        let len = self.residual_len(t);
        let mut columns: Vec<Vec<ExactScalar>> = Vec::with_capacity(2 * unknowns.len());
        let probes = [ExactScalar::one(), ExactScalar::i()];
        let plan = unknowns
            .g_monomials
            .iter()
            .map(|&mn| (MapComponent::G, mn))
            .chain(
                unknowns
                    .f_monomials
                    .iter()
                    .map(|&kl| (MapComponent::F, kl)),
            );
        for (component, monomial) in plan {
            for probe in &probes {
                let map = elementary_map(self.k0(), monomial, probe.clone(), component)?;
                let image = apply_map(&map, &base)?;
                columns.push(self.residual_values(&image.tail_part(t), t)?);
            }
        }
        let mut matrix = vec![vec![BigRational::from_integer(0.into()); columns.len()]; 2 * len];
        for (c, col) in columns.iter().enumerate() {
            for (r, value) in col.iter().enumerate() {
                matrix[2 * r][c] = value.re().clone();
                matrix[2 * r + 1][c] = value.im().clone();
            }
        }
        let sys = Rc::new(DegreeSystem {
            unknowns,
            prepared: Prepared::new(matrix),
        });
        self.systems.borrow_mut().insert(t, sys.clone());
        Ok(sys)
    }

    fn map_from_solution(&self, unknowns: &DegreeUnknowns, x: &[BigRational]) -> Result<TangentIdentityMap> {
        let mut g = WJet::zero();
        let mut f = WJet::zero();
        let mut idx = 0;
        for &(m, n) in &unknowns.g_monomials {
            g.add_to_coeff(m, n, &ExactScalar::new(x[idx].clone(), x[idx + 1].clone()));
            idx += 2;
        }
        for &(k, l) in &unknowns.f_monomials {
            f.add_to_coeff(k, l, &ExactScalar::new(x[idx].clone(), x[idx + 1].clone()));
            idx += 2;
        }
        TangentIdentityMap::new(self.k0(), f, g)
    }

    /// Imposes the degree-`t` membership condition on a surface.
    ///
    /// Returns the committed elementary map (identity when the degree was
    /// already normal) and the transformed surface. Degrees below `t` are
    /// asserted bit-identical afterwards.
    pub fn solve_degree(&self, surface: &SurfaceJet, t: u32) -> Result<(TangentIdentityMap, SurfaceJet)> {
        let part = surface.tail_part(t);
        let r0 = self.residual_values(&part, t)?;
        if r0.iter().all(ExactScalar::is_zero) {
            return Ok((TangentIdentityMap::identity(self.k0()), surface.clone()));
        }
        let sys = self.degree_system(t)?;
        let mut b = Vec::with_capacity(2 * r0.len());
        for v in &r0 {
            b.push(-v.re());
            b.push(-v.im());
        }
        let x = match sys.prepared.solve(&b) {
            SolveOutcome::Unique(x) => x,
            SolveOutcome::Inconsistent(row) => {
                return Err(Error::DegreeSystemInconsistent {
                    degree: t,
                    detail: format!(
                        "no admissible map reaches the degree-{} residual (violated row {})",
                        t, row
                    ),
                })
            }
            SolveOutcome::Underdetermined => {
                return Err(Error::DegreeSystemUnderdetermined { degree: t })
            }
        };
        let map = self.map_from_solution(&sys.unknowns, &x)?;
        let image = apply_map(&map, surface)?;
        for d in self.k0() + 1..t {
            if image.tail_part(d) != surface.tail_part(d) {
                return Err(Error::LowerDegreeDisturbed {
                    degree: t,
                    detail: format!("degree {} changed during the degree-{} step", d, t),
                });
            }
        }
        let committed = self.residual_values(&image.tail_part(t), t)?;
        if !committed.iter().all(ExactScalar::is_zero) {
            return Err(Error::DegreeSystemInconsistent {
                degree: t,
                detail: "solved map did not zero the residual".into(),
            });
        }
        Ok((map, image))
    }

    /// Applies a corrective with parameter `a`, re-imposes pass-1 conditions
    /// through `stop`, and returns the composed map with the surface.
    fn corrective_pipeline(
        &self,
        surface: &SurfaceJet,
        event: &ResonanceEvent,
        a: &ExactScalar,
        stop: u32,
    ) -> Result<(TangentIdentityMap, SurfaceJet)> {
        let cm = corrective_map(event.case, self.k0(), event.t, &self.alpha, a)?;
        self.map_pipeline(surface, &cm, stop)
    }

    /// Applies a map, re-imposes pass-1 conditions through `stop`, and
    /// returns the composed map with the surface.
    fn map_pipeline(
        &self,
        surface: &SurfaceJet,
        cm: &TangentIdentityMap,
        stop: u32,
    ) -> Result<(TangentIdentityMap, SurfaceJet)> {
        // Only degrees <= stop are ever read from the result, and degree d of
        // a transformed jet depends only on degrees <= d of the input, so the
        // working jet is clipped up front; probes at stop < order stay cheap.
        let work = if stop < surface.order() {
            surface.truncated(stop)?
        } else {
            surface.clone()
        };
        let mut total = cm.clone();
        let mut cur = apply_map(cm, &work)?;
        for t in self.k0() + 1..=stop {
            let (m, next) = self.solve_degree(&cur, t)?;
            if !m.is_identity() {
                total = compose_maps_to_order(&total, &m, stop)?;
            }
            cur = next;
        }
        Ok((total, cur))
    }

    /// Zeroes the zbar-pure coefficient at one resonant degree.
    ///
    /// The dependence of the target on the corrective parameter is measured
    /// by exact probing at 0, 1, i and confirmed affine at 1 + i; the 2x2
    /// real system is then solved and the commit re-checked from scratch.
    fn solve_resonance(
        &self,
        surface: &SurfaceJet,
        event: &ResonanceEvent,
        earlier_targets: &[u32],
        s: u32,
    ) -> Result<ResonanceOutcome> {
        let target = event.degree;
        let before = surface.tail_coeff(0, target);
        let predicted_factor = self.predicted_factor(event, s);
        if before.is_zero() {
            return Ok(ResonanceOutcome {
                map: TangentIdentityMap::identity(self.k0()),
                surface: surface.clone(),
                record: ResonanceRecord {
                    degree: target,
                    case: event.case,
                    t: event.t,
                    target_before: before,
                    parameter: ExactScalar::zero(),
                    probed: false,
                    affine_confirmed: true,
                    locality_verified: true,
                    predicted_factor,
                    measured_slope: [ExactScalar::zero(), ExactScalar::zero()],
                },
            });
        }
        let probe = |a: &ExactScalar| -> Result<ExactScalar> {
            let (_, probed) = self.corrective_pipeline(surface, event, a, target)?;
            Ok(probed.tail_coeff(0, target))
        };
        let v0 = before.clone();
        let v1 = probe(&ExactScalar::one())?;
        let vi = probe(&ExactScalar::i())?;
        let vmix = probe(&(&ExactScalar::one() + &ExactScalar::i()))?;
        if &(&v1 + &vi) - &v0 != vmix {
            return Err(Error::ResonanceNonAffine {
                degree: target,
                probes: format!(
                    "phi(0) = {}; phi(1) = {}; phi(i) = {}; phi(1+i) = {} != phi(1) + phi(i) - phi(0)",
                    v0, v1, vi, vmix
                ),
            });
        }
        let col_re = &v1 - &v0;
        let col_im = &vi - &v0;
        let matrix = vec![
            vec![col_re.re().clone(), col_im.re().clone()],
            vec![col_re.im().clone(), col_im.im().clone()],
        ];
        let rhs = vec![-v0.re(), -v0.im()];
        let a = match Prepared::new(matrix).solve(&rhs) {
            SolveOutcome::Unique(x) => ExactScalar::new(x[0].clone(), x[1].clone()),
            _ => return Err(Error::ResonanceSingular { degree: target }),
        };
        let (map, committed) = self.corrective_pipeline(surface, event, &a, self.order)?;
        if !committed.tail_coeff(0, target).is_zero() {
            return Err(Error::ResonanceNonAffine {
                degree: target,
                probes: format!(
                    "solved parameter {} left the target at {}; dependence is not affine",
                    a,
                    committed.tail_coeff(0, target)
                ),
            });
        }
        let first_action = match event.case {
            ResonanceCase::A => self.k0() * event.t + self.k0() - 1,
            ResonanceCase::B => self.k0() * (event.t + 1),
        };
        for d in self.k0() + 1..first_action.min(self.order + 1) {
            if committed.tail_part(d) != surface.tail_part(d) {
                return Err(Error::LowerDegreeDisturbed {
                    degree: target,
                    detail: format!(
                        "degree {} changed during the resonance step at degree {}",
                        d, target
                    ),
                });
            }
        }
        for &earlier in earlier_targets {
            if !committed.tail_coeff(0, earlier).is_zero() {
                return Err(Error::LowerDegreeDisturbed {
                    degree: target,
                    detail: format!(
                        "previously zeroed target at degree {} became {}",
                        earlier,
                        committed.tail_coeff(0, earlier)
                    ),
                });
            }
        }
        Ok(ResonanceOutcome {
            map,
            surface: committed,
            record: ResonanceRecord {
                degree: target,
                case: event.case,
                t: event.t,
                target_before: before,
                parameter: a,
                probed: true,
                affine_confirmed: true,
                locality_verified: true,
                predicted_factor,
                measured_slope: [col_re, col_im],
            },
        })
    }

    /// The composition of one corrective per listed family, ascending.
    fn composed_correctives(
        &self,
        families: &[BoundaryFamily],
        params: &[(usize, ExactScalar)],
    ) -> Result<TangentIdentityMap> {
        let mut cm = TangentIdentityMap::identity(self.k0());
        for (idx, a) in params {
            let f = &families[*idx];
            let next = corrective_map(f.case, self.k0(), f.t, &self.alpha, a)?;
            cm = compose_maps_to_order(&cm, &next, self.order)?;
        }
        Ok(cm)
    }

    /// Pins the truncation-boundary families by one joint least squares.
    ///
    /// Each family's designated pure coefficient lies beyond the order, so
    /// nothing can be zeroed in its place. Instead the same probing as in
    /// pass 2 measures each family's affine action on the whole jet, and
    /// all parameters are solved together so the jet's projection onto
    /// every motion direction vanishes. The solve must be joint: families
    /// can move overlapping degrees, and pinning them one at a time
    /// disturbs the pins already made. The result is canonical even when
    /// the normal system is rank-deficient, because its solutions differ
    /// only along the kernel of the motion matrix and all land the jet on
    /// the same orthogonal projection.
    fn solve_boundaries(
        &self,
        surface: &SurfaceJet,
        families: &[BoundaryFamily],
        resonance_targets: &[u32],
    ) -> Result<BoundaryPass> {
        let mut pass = BoundaryPass {
            map: TangentIdentityMap::identity(self.k0()),
            surface: surface.clone(),
            records: Vec::new(),
        };
        if families.is_empty() {
            return Ok(pass);
        }
        let base = surface.tail().clone();
        let one = ExactScalar::one();
        let i = ExactScalar::i();
        let mut probes = Vec::with_capacity(families.len());
        for family in families {
            let event = ResonanceEvent {
                degree: family.target_degree,
                case: family.case,
                t: family.t,
            };
            let probe = |a: &ExactScalar| -> Result<BiPoly> {
                let (_, probed) = self.corrective_pipeline(surface, &event, a, self.order)?;
                Ok(probed.tail() - &base)
            };
            let col_re = probe(&one)?;
            let col_im = probe(&i)?;
            // A quadratic action (possible when s is large relative to k0)
            // would make the least-squares pin non-canonical, so such a
            // family is left unspent and flagged.
            let affine = probe(&(&one + &i))? == &col_re + &col_im;
            let inert = col_re.is_zero() && col_im.is_zero();
            probes.push(FamilyProbe {
                col_re,
                col_im,
                affine,
                inert,
            });
        }
        let mut active: Vec<usize> = (0..families.len())
            .filter(|&j| probes[j].affine && !probes[j].inert)
            .collect();
        if active.len() > 1 {
            // Per-parameter affinity does not rule out bilinear terms
            // mixing two families; engage every active family at once and
            // require the columns to predict the motion.
            let mix = &one + &i;
            let engaged: Vec<(usize, ExactScalar)> =
                active.iter().map(|&j| (j, mix.clone())).collect();
            let cm = self.composed_correctives(families, &engaged)?;
            let (_, probed) = self.map_pipeline(surface, &cm, self.order)?;
            let mut predicted = base.clone();
            for &j in &active {
                predicted = &(&predicted + &probes[j].col_re) + &probes[j].col_im;
            }
            if probed.tail() != &predicted {
                for j in active.drain(..) {
                    probes[j].affine = false;
                }
            }
        }
        let mut params: Vec<(usize, ExactScalar)> = Vec::new();
        if !active.is_empty() {
            let dim = 2 * active.len();
            let column = |c: usize| -> &BiPoly {
                let p = &probes[active[c / 2]];
                if c % 2 == 0 {
                    &p.col_re
                } else {
                    &p.col_im
                }
            };
            let mut gram = vec![vec![BigRational::zero(); dim]; dim];
            let mut rhs = vec![BigRational::zero(); dim];
            for r in 0..dim {
                for c in r..dim {
                    let v = tail_inner(column(r), column(c));
                    gram[r][c] = v.clone();
                    gram[c][r] = v;
                }
                rhs[r] = -tail_inner(column(r), &base);
            }
            let x = Prepared::new(gram).solve_particular(&rhs).ok_or_else(|| {
                Error::DegreeSystemInconsistent {
                    degree: families[active[0]].first_degree,
                    detail: "joint boundary normal equations are inconsistent".into(),
                }
            })?;
            for (c, &j) in active.iter().enumerate() {
                let a = ExactScalar::new(x[2 * c].clone(), x[2 * c + 1].clone());
                if !a.is_zero() {
                    params.push((j, a));
                }
            }
        }
        if !params.is_empty() {
            let cm = self.composed_correctives(families, &params)?;
            let (map, committed) = self.map_pipeline(surface, &cm, self.order)?;
            for &j in &active {
                if !tail_inner(&probes[j].col_re, committed.tail()).is_zero()
                    || !tail_inner(&probes[j].col_im, committed.tail()).is_zero()
                {
                    return Err(Error::ResonanceNonAffine {
                        degree: families[j].first_degree,
                        probes: "the jointly solved parameters left a nonzero projection; \
                                 dependence is not affine"
                            .into(),
                    });
                }
            }
            let acts_from = params
                .iter()
                .map(|(j, _)| families[*j].first_degree)
                .min()
                .expect("params is nonempty");
            for d in self.k0() + 1..acts_from {
                if committed.tail_part(d) != surface.tail_part(d) {
                    return Err(Error::LowerDegreeDisturbed {
                        degree: acts_from,
                        detail: format!(
                            "degree {} changed during the boundary pin acting from degree {}",
                            d, acts_from
                        ),
                    });
                }
            }
            for &earlier in resonance_targets {
                if !committed.tail_coeff(0, earlier).is_zero() {
                    return Err(Error::LowerDegreeDisturbed {
                        degree: acts_from,
                        detail: format!(
                            "previously zeroed target at degree {} became {}",
                            earlier,
                            committed.tail_coeff(0, earlier)
                        ),
                    });
                }
            }
            pass.map = map;
            pass.surface = committed;
        }
        for (j, family) in families.iter().enumerate() {
            let parameter = params
                .iter()
                .find(|(idx, _)| *idx == j)
                .map(|(_, a)| a.clone())
                .unwrap_or_else(ExactScalar::zero);
            pass.records.push(BoundaryRecord {
                case: family.case,
                t: family.t,
                first_degree: family.first_degree,
                target_degree: family.target_degree,
                parameter,
                inert: probes[j].inert,
                affine_confirmed: probes[j].affine,
                pinned: probes[j].affine,
                locality_verified: true,
            });
        }
        Ok(pass)
    }

    /// The closed-form factor predicted for the event; purely diagnostic,
    /// never used to solve.
    fn predicted_factor(&self, event: &ResonanceEvent, s: u32) -> ExactScalar {
        let s_scalar = ExactScalar::from_int(s as i64);
        let base = &self.alpha - &(&s_scalar / &self.alpha);
        match event.case {
            ResonanceCase::A => &(&self.alpha - &s_scalar) * &base.pow(event.t - 1),
            ResonanceCase::B => &(&self.alpha - &s_scalar) * &base.pow(event.t),
        }
    }
}

/// Runs both passes and returns the normal form, the transformation, and
/// the audit report.
pub fn normalize(surface: &SurfaceJet) -> Result<NormalizationResult> {
    let inv = surface_invariants(surface);
    if !inv.nondegenerate {
        return Err(Error::NondegeneracyViolated(inv.failures));
    }
    let s = inv.s.expect("nondegenerate implies s is finite");
    let order = surface.order();
    let k0 = surface.k0();
    let engine = Normalizer::new(surface.model().clone(), order)?;

    let mut current = surface.clone();
    let mut total = TangentIdentityMap::identity(k0);
    let mut degrees = Vec::new();
    for t in k0 + 1..=order {
        let unknowns = degree_unknowns(k0, t)?;
        let (map, next) = engine.solve_degree(&current, t)?;
        degrees.push(DegreeRecord {
            degree: t,
            g_unknowns: unknowns.g_monomials.len(),
            f_unknowns: unknowns.f_monomials.len(),
            residual_was_zero: map.is_identity(),
        });
        if !map.is_identity() {
            total = compose_maps_to_order(&total, &map, order)?;
        }
        current = next;
    }

    let mut resonances = Vec::new();
    let mut earlier: Vec<u32> = Vec::new();
    for event in resonance_schedule(k0, s, order) {
        let outcome = engine.solve_resonance(&current, &event, &earlier, s)?;
        if !outcome.map.is_identity() {
            total = compose_maps_to_order(&total, &outcome.map, order)?;
        }
        current = outcome.surface;
        resonances.push(outcome.record);
        earlier.push(event.degree);
    }

    let families = boundary_families(k0, s, order);
    let pass3 = engine.solve_boundaries(&current, &families, &earlier)?;
    if !pass3.map.is_identity() {
        total = compose_maps_to_order(&total, &pass3.map, order)?;
    }
    current = pass3.surface;
    let boundaries = pass3.records;

    Ok(NormalizationResult {
        map: total,
        normal_form: current,
        report: NormalizeReport {
            k0,
            order,
            s,
            alpha: inv.alpha,
            degrees,
            resonances,
            boundaries,
            conventions: conventions(),
        },
    })
}
