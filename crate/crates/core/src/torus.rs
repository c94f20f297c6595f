//! Time-dependent Hamiltonian system on T² with `h_t(x, y) = λ(x)ν(y − t)`,
//! its 1-periodic orbits in the winding class (0, 1), their Conley–Zehnder
//! indices, the connecting trajectories between them and the resulting
//! Floer complex over the Laurent ring.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix2, Vector2};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::Lattice;
use crate::linalg::Matrix;
use crate::series::{NovikovElement, SeriesError};
use crate::torsion::{BasedComplex, Generator, Grading, TorsionError, TorsionOptions, WhiteheadClass};

const TAU: f64 = 2.0 * PI;

/// Integration step of the time-1 map.
pub const STEPS_PER_PERIOD: usize = 2048;
/// Non-degeneracy threshold on `|det(I − M)|`.
pub const NONDEGENERACY: f64 = 1e-6;
pub const DEFAULT_NEWTON_TOL: f64 = 1e-10;
pub const DEFAULT_GRID: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorusError {
    #[error("parameter b = {b} violates: {condition}")]
    Conditions { b: String, condition: String },
    #[error("1 + λ'(x) has no zeros for b = {b}: there are no orbits to connect")]
    NoEquilibria { b: String },
    #[error("Newton iteration did not converge from any of the {seeds} seeds")]
    NewtonFailed { seeds: usize },
    #[error("degenerate endpoint: |tr M − 2| = {gap:e}")]
    Degenerate { gap: f64 },
    #[error("expected 2 orbits, found {0}")]
    OrbitCount(usize),
    #[error("sign of 1 + λ' is not certified on the arc ({0}, {1})")]
    ArcSign(f64, f64),
    #[error("integration check failed: {0}")]
    Integration(String),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `λ(x) = 1 + b·cos(2πx)` and a fixed profile
/// `ν(y) = 1 − u/(4π²) − (1/8 − 1/(8π²))·u²` with `u = 1 − cos(2πy)`.
///
/// ν has the jets ν(0) = 1, ν'(0) = 0, ν''(0) = −1, is decreasing on
/// (0, 1/2) and takes the value 1/2 at y = 1/2, so `λ'(x)ν(η) = −1` has
/// solutions only at η = 0 for every admissible b.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusSystem {
    b: BigRational,
    bf: f64,
}

const NU_QUAD: f64 = 0.125 - 0.125 / (PI * PI);

impl TorusSystem {
    pub fn new(b: BigRational) -> Result<Self, TorusError> {
        let s = Self::unchecked(b);
        s.check_conditions()?;
        Ok(s)
    }

    /// Without the parameter window check, for probing the boundary cases.
    pub fn unchecked(b: BigRational) -> Self {
        let bf = b.to_f64().unwrap_or(f64::NAN);
        TorusSystem { b, bf }
    }

    pub fn default_b() -> BigRational {
        BigRational::new(BigInt::from(1), BigInt::from(5))
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn b_f64(&self) -> f64 {
        self.bf
    }

    pub fn lambda(&self, x: f64) -> f64 {
        1.0 + self.bf * (TAU * x).cos()
    }

    pub fn dlambda(&self, x: f64) -> f64 {
        -TAU * self.bf * (TAU * x).sin()
    }

    pub fn ddlambda(&self, x: f64) -> f64 {
        -TAU * TAU * self.bf * (TAU * x).cos()
    }

    pub fn nu(&self, y: f64) -> f64 {
        let u = 1.0 - (TAU * y).cos();
        1.0 - u / (TAU * TAU) - NU_QUAD * u * u
    }

    pub fn dnu(&self, y: f64) -> f64 {
        let u = 1.0 - (TAU * y).cos();
        let du = TAU * (TAU * y).sin();
        -du * (1.0 / (TAU * TAU) + 2.0 * NU_QUAD * u)
    }

    pub fn ddnu(&self, y: f64) -> f64 {
        let u = 1.0 - (TAU * y).cos();
        let du = TAU * (TAU * y).sin();
        let ddu = TAU * TAU * (TAU * y).cos();
        -ddu / (TAU * TAU) - 2.0 * NU_QUAD * (du * du + u * ddu)
    }

    pub fn hamiltonian(&self, x: f64, y: f64, t: f64) -> f64 {
        self.lambda(x) * self.nu(y - t)
    }

    /// `Z_t = λ(x)ν'(y−t) ∂_x − λ'(x)ν(y−t) ∂_y`.
    pub fn vector_field(&self, x: f64, y: f64, t: f64) -> (f64, f64) {
        let e = y - t;
        (self.lambda(x) * self.dnu(e), -self.dlambda(x) * self.nu(e))
    }

    fn jacobian(&self, x: f64, y: f64, t: f64) -> Matrix2<f64> {
        let e = y - t;
        let (l, dl, ddl) = (self.lambda(x), self.dlambda(x), self.ddlambda(x));
        let (n, dn, ddn) = (self.nu(e), self.dnu(e), self.ddnu(e));
        Matrix2::new(dl * dn, l * ddn, -ddl * n, -dl * dn)
    }

    /// The parameter window `1/(2π) < b < 1/(π√2)` and the jet and size
    /// conditions it encodes, checked numerically.
    pub fn check_conditions(&self) -> Result<(), TorusError> {
        let fail = |condition: &str| TorusError::Conditions {
            b: self.b.to_string(),
            condition: condition.into(),
        };
        if !self.bf.is_finite() || self.bf <= 0.0 {
            return Err(fail("b > 0"));
        }
        if (self.nu(0.0) - 1.0).abs() > 1e-14 || self.dnu(0.0).abs() > 1e-14 || (self.ddnu(0.0) + 1.0).abs() > 1e-12 {
            return Err(fail("ν(0) = 1, ν'(0) = 0, ν''(0) = −1"));
        }
        if self.bf * TAU <= 1.0 {
            return Err(fail("min λ' < −1, i.e. b > 1/(2π)"));
        }
        for x in self.equilibria()? {
            let (l, ddl) = (self.lambda(x), self.ddlambda(x));
            if !(l.abs() > 0.0 && l.abs() < TAU && ddl.abs() > 0.0 && ddl.abs() < TAU) {
                return Err(fail("0 < |λ''(x_i)| < 2π and 0 < |λ(x_i)| < 2π, i.e. b < 1/(π√2)"));
            }
        }
        Ok(())
    }

    /// The two zeros of `1 + λ'(x) = 1 − 2πb·sin(2πx)` in [0, 1), found by
    /// the closed form `sin(2πx) = 1/(2πb)`.
    pub fn equilibria(&self) -> Result<[f64; 2], TorusError> {
        let s = 1.0 / (TAU * self.bf);
        if !(s.abs() < 1.0) {
            return Err(TorusError::NoEquilibria { b: self.b.to_string() });
        }
        let a = s.asin() / TAU;
        Ok([a, 0.5 - a])
    }

    /// One step of RK4 on the state `(p, Ψ)` with `Ψ' = DZ_t(p)·Ψ`.
    fn rk4_step(&self, p: Vector2<f64>, m: Matrix2<f64>, t: f64, h: f64) -> (Vector2<f64>, Matrix2<f64>) {
        let f = |p: &Vector2<f64>, m: &Matrix2<f64>, t: f64| {
            let (dx, dy) = self.vector_field(p.x, p.y, t);
            (Vector2::new(dx, dy), self.jacobian(p.x, p.y, t) * m)
        };
        let (k1p, k1m) = f(&p, &m, t);
        let (k2p, k2m) = f(&(p + k1p * (h / 2.0)), &(m + k1m * (h / 2.0)), t + h / 2.0);
        let (k3p, k3m) = f(&(p + k2p * (h / 2.0)), &(m + k2m * (h / 2.0)), t + h / 2.0);
        let (k4p, k4m) = f(&(p + k3p * h), &(m + k3m * h), t + h);
        (
            p + (k1p + k2p * 2.0 + k3p * 2.0 + k4p) * (h / 6.0),
            m + (k1m + k2m * 2.0 + k3m * 2.0 + k4m) * (h / 6.0),
        )
    }

    /// Time-1 map and its derivative, integrated with `steps` RK4 steps.
    pub fn time_one(&self, p: Vector2<f64>, steps: usize) -> (Vector2<f64>, Matrix2<f64>) {
        let h = 1.0 / steps as f64;
        let mut state = (p, Matrix2::identity());
        for k in 0..steps {
            state = self.rk4_step(state.0, state.1, k as f64 * h, h);
        }
        state
    }

    /// The linearized path `Ψ(t_k)`, `t_k = k/steps`, along the orbit through `p`.
    pub fn linearized_path(&self, p: Vector2<f64>, steps: usize) -> Vec<Matrix2<f64>> {
        let h = 1.0 / steps as f64;
        let mut out = Vec::with_capacity(steps + 1);
        let mut state = (p, Matrix2::identity());
        out.push(state.1);
        for k in 0..steps {
            state = self.rk4_step(state.0, state.1, k as f64 * h, h);
            out.push(state.1);
        }
        out
    }

    /// `exp` of `A = [[0, −λ(x)], [−λ''(x), 0]]`, using `A² = λλ''·I`.
    pub fn closed_form_monodromy(&self, x: f64) -> Matrix2<f64> {
        let (l, ddl) = (self.lambda(x), self.ddlambda(x));
        let a = Matrix2::new(0.0, -l, -ddl, 0.0);
        let s = l * ddl;
        let (c, k) = if s < 0.0 {
            let w = (-s).sqrt();
            (w.cos(), w.sin() / w)
        } else if s > 0.0 {
            let w = s.sqrt();
            (w.cosh(), w.sinh() / w)
        } else {
            (1.0, 1.0)
        };
        Matrix2::identity() * c + a * k
    }

    /// Fixed points of `p ↦ Φ₁(p) − (0, 1)` by Newton iteration from a
    /// `grid × grid` set of seeds on T², deduplicated with the wrap-around
    /// metric.
    pub fn find_orbits(&self, newton_tol: f64, grid: usize) -> Result<OrbitSearch, TorusError> {
        let seeds: Vec<Vector2<f64>> = (0..grid)
            .flat_map(|i| {
                (0..grid).map(move |j| Vector2::new((i as f64 + 0.5) / grid as f64, (j as f64 + 0.5) / grid as f64))
            })
            .collect();
        let hits: Vec<Vector2<f64>> = seeds
            .par_iter()
            .filter_map(|s| self.newton(*s, newton_tol))
            .collect();
        if hits.is_empty() {
            return Err(TorusError::NewtonFailed { seeds: seeds.len() });
        }
        let converged = hits.len();
        let mut points: Vec<Vector2<f64>> = Vec::new();
        for p in hits {
            let q = Vector2::new(p.x.rem_euclid(1.0), p.y.rem_euclid(1.0));
            let q = Vector2::new(snap(q.x), snap(q.y));
            if !points.iter().any(|r| torus_distance(r, &q) < 1e-6) {
                points.push(q);
            }
        }
        points.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        let orbits = points
            .into_iter()
            .map(|p| self.orbit_at(p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OrbitSearch {
            orbits,
            grid,
            seeds: seeds.len(),
            converged,
        })
    }

    fn newton(&self, seed: Vector2<f64>, tol: f64) -> Option<Vector2<f64>> {
        let target = Vector2::new(0.0, 1.0);
        let mut p = seed;
        for _ in 0..40 {
            let (q, m) = self.time_one(p, STEPS_PER_PERIOD);
            let g = q - p - target;
            if g.norm() < tol {
                return Some(p);
            }
            let j = m - Matrix2::identity();
            let mut step = j.try_inverse()? * g;
            let n = step.norm();
            if !n.is_finite() {
                return None;
            }
            if n > 0.1 {
                step *= 0.1 / n;
            }
            p -= step;
        }
        None
    }

    fn orbit_at(&self, p: Vector2<f64>) -> Result<PeriodicOrbit, TorusError> {
        let (q, m) = self.time_one(p, STEPS_PER_PERIOD);
        let (q2, m2) = self.time_one(p, 2 * STEPS_PER_PERIOD);
        let richardson = (q - q2).norm().max((m - m2).abs().max());
        let det_i_minus_m = (Matrix2::identity() - m).determinant();
        Ok(PeriodicOrbit {
            x: p.x,
            y: p.y,
            return_error: (q - p - Vector2::new(0.0, 1.0)).norm(),
            richardson,
            monodromy: m,
            det_i_minus_m,
        })
    }

    /// Monodromy of the orbit through `p`, with the half-step Richardson
    /// difference.
    pub fn monodromy(&self, orbit: &PeriodicOrbit) -> Matrix2<f64> {
        self.time_one(Vector2::new(orbit.x, orbit.y), STEPS_PER_PERIOD).1
    }

    /// Arc analysis of `x'(s) = 1 + λ'(x(s))` on the two arcs of S¹ minus
    /// the equilibria. Each arc with a certified constant sign carries one
    /// trajectory; its label is 1 (the generator z) when it crosses x = 0.
    pub fn count_connecting(&self) -> Result<ConnectingCount, TorusError> {
        let [a, c] = self.equilibria()?;
        let f = |x: f64| 1.0 + self.dlambda(x);
        let mut trajectories = Vec::new();
        for (lo, hi) in [(a, c), (c, a + 1.0)] {
            let sign = certified_sign(self, lo, hi).ok_or(TorusError::ArcSign(lo, hi))?;
            debug_assert_eq!(sign, f(0.5 * (lo + hi)).signum());
            // Flow runs from the upper end to the lower end when x' < 0.
            let (from, to) = if sign < 0.0 { (hi, lo) } else { (lo, hi) };
            let crosses_zero = hi > 1.0;
            trajectories.push(ConnectingTrajectory {
                from: from.rem_euclid(1.0),
                to: to.rem_euclid(1.0),
                arc: (lo, hi.rem_euclid(1.0)),
                label: i64::from(crosses_zero),
            });
        }
        Ok(ConnectingCount { trajectories })
    }
}

fn snap(v: f64) -> f64 {
    if (v - 1.0).abs() < 1e-9 {
        0.0
    } else {
        v
    }
}

fn torus_distance(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    let d = |u: f64, v: f64| {
        let t = (u - v).rem_euclid(1.0);
        t.min(1.0 - t)
    };
    d(a.x, b.x).hypot(d(a.y, b.y))
}

/// Sign of `f = 1 + λ'` on the open arc (lo, hi) between two zeros of f.
///
/// Near each end f is certified monotone through `|f''| ≤ 8π³b`; on the
/// interior a sample grid with `|f'| ≤ 4π²b` bounds f away from zero.
fn certified_sign(sys: &TorusSystem, lo: f64, hi: f64) -> Option<f64> {
    let b = sys.bf;
    let f = |x: f64| 1.0 + sys.dlambda(x);
    let df = |x: f64| -TAU * TAU * b * (TAU * x).cos();
    let l1 = TAU * TAU * b;
    let l2 = TAU * TAU * TAU * b;
    let mut sign = None;
    let mut check = |s: f64| -> bool {
        match sign {
            None => {
                sign = Some(s);
                true
            }
            Some(t) => t == s,
        }
    };
    // End pieces: f' keeps its sign on [end, end ± δ] when |f'(end)| > l2·δ.
    let delta_for = |x: f64| 0.5 * df(x).abs() / l2;
    let (dl, dh) = (delta_for(lo), delta_for(hi));
    if dl <= 0.0 || dh <= 0.0 || lo + dl >= hi - dh {
        return None;
    }
    if !check(df(lo).signum()) || !check(-df(hi).signum()) {
        return None;
    }
    let n = 4096;
    let h = (hi - dh - (lo + dl)) / n as f64;
    for k in 0..=n {
        let x = lo + dl + k as f64 * h;
        let v = f(x);
        if v.abs() <= l1 * h / 2.0 || !check(v.signum()) {
            return None;
        }
    }
    // Values at the inner ends of the monotone pieces also keep the sign.
    if !check(f(lo + dl).signum()) || !check(f(hi - dh).signum()) {
        return None;
    }
    sign
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit {
    /// Base point at t = 0.
    pub x: f64,
    pub y: f64,
    /// `|Φ₁(p) − p − (0, 1)|`.
    pub return_error: f64,
    /// Difference between the step h and step h/2 integrations.
    pub richardson: f64,
    pub monodromy: Matrix2<f64>,
    pub det_i_minus_m: f64,
}

impl PeriodicOrbit {
    pub fn is_nondegenerate(&self) -> bool {
        self.det_i_minus_m.abs() > NONDEGENERACY
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSearch {
    pub orbits: Vec<PeriodicOrbit>,
    pub grid: usize,
    pub seeds: usize,
    /// Seeds from which Newton converged.
    pub converged: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectingTrajectory {
    pub from: f64,
    pub to: f64,
    pub arc: (f64, f64),
    /// Exponent of z in Γ ≅ Z.
    pub label: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectingCount {
    pub trajectories: Vec<ConnectingTrajectory>,
}

impl ConnectingCount {
    pub fn total(&self) -> usize {
        self.trajectories.len()
    }

    pub fn labels(&self) -> Vec<i64> {
        self.trajectories.iter().map(|t| t.label).collect()
    }
}

/// Conley–Zehnder index of a sampled path in Sp(2) starting at the
/// identity, normalized so that `exp(tJ₀S)` with small symmetric S has
/// index `1 + sign(S)/2` (the Morse index of `−S`), with
/// `J₀ = [[0, −1], [1, 0]]`. A full counterclockwise loop adds 2.
///
/// The winding of a tracked vector decides the index: the eigenvector of
/// the endpoint for positive hyperbolic endpoints, any vector otherwise.
pub fn conley_zehnder(path: &[Matrix2<f64>]) -> Result<i64, TorusError> {
    let end = path.last().ok_or_else(|| TorusError::Integration("empty path".into()))?;
    let tr = end.trace();
    let gap = (tr - 2.0).abs();
    if gap < NONDEGENERACY {
        return Err(TorusError::Degenerate { gap });
    }
    let winding = |v: Vector2<f64>| -> f64 {
        let mut prev = v.y.atan2(v.x);
        let start = prev;
        let mut total = 0.0;
        for m in path.iter().skip(1) {
            let w = m * v;
            let a = w.y.atan2(w.x);
            let mut d = a - prev;
            while d > PI {
                d -= TAU;
            }
            while d < -PI {
                d += TAU;
            }
            total += d;
            prev = a;
        }
        let _ = start;
        total / TAU
    };
    let mu = if tr > 2.0 {
        // Positive hyperbolic: eigenvector for the eigenvalue > 1.
        let disc = (tr * tr / 4.0 - 1.0).sqrt();
        let ev = tr / 2.0 + disc;
        let (a, b, c, d) = (end[(0, 0)], end[(0, 1)], end[(1, 0)], end[(1, 1)]);
        let v = if b.abs() > c.abs() {
            Vector2::new(b, ev - a)
        } else {
            Vector2::new(ev - d, c)
        };
        2 * winding(v.normalize()).round() as i64
    } else {
        2 * winding(Vector2::new(1.0, 0.0)).floor() as i64 + 1
    };
    Ok(mu + 1)
}

/// Sign rule for the connecting trajectory counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    /// Every trajectory counts +1.
    Unsigned,
    /// The trajectory with label k counts (−1)^k.
    Alternating,
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignConvention::Unsigned => write!(f, "unsigned"),
            SignConvention::Alternating => write!(f, "alternating"),
        }
    }
}

/// Floer complex over the Laurent lattice with generators named `x{i}`
/// after the orbit order by x-coordinate and degrees equal to their
/// indices.
pub fn assemble_floer(
    orbits: &[(PeriodicOrbit, i64)],
    connecting: &ConnectingCount,
    convention: SignConvention,
) -> Result<BasedComplex, TorusError> {
    let lattice = Arc::new(Lattice::laurent());
    let grading = Grading::from_chern(lattice.minimal_chern_number());
    let generators: Vec<Generator> = orbits
        .iter()
        .enumerate()
        .map(|(i, (_, mu))| Generator::new(format!("x{i}"), grading.reduce(*mu)))
        .collect();
    let index_of = |x: f64| -> Result<usize, TorusError> {
        orbits
            .iter()
            .position(|(o, _)| torus_distance(&Vector2::new(o.x, 0.0), &Vector2::new(x, 0.0)) < 1e-6)
            .ok_or_else(|| TorusError::Integration(format!("no orbit at x = {x}")))
    };
    let mut d = Matrix::zeros(&lattice, generators.len(), generators.len());
    for t in &connecting.trajectories {
        let (s, r) = (index_of(t.from)?, index_of(t.to)?);
        let sign = match convention {
            SignConvention::Unsigned => 1,
            SignConvention::Alternating => 1 - 2 * (t.label.rem_euclid(2)),
        };
        let term = NovikovElement::monomial(
            &lattice,
            BigRational::from_integer(BigInt::from(sign)),
            lattice.element(vec![t.label]).map_err(SeriesError::from)?,
        )?;
        let sum = d.get(r, s) + &term;
        d.set(r, s, sum);
    }
    Ok(BasedComplex::new(lattice, grading, generators, d)?)
}

/// Milnor torsion of an assembled Floer complex.
pub fn torus_torsion(complex: &BasedComplex, opts: &TorsionOptions) -> Result<WhiteheadClass, TorusError> {
    Ok(complex.milnor_torsion(opts)?)
}

#[derive(Debug, Clone)]
pub struct FloerVariant {
    pub convention: SignConvention,
    pub complex: BasedComplex,
    pub torsion: WhiteheadClass,
}

#[derive(Debug, Clone)]
pub struct TorusReport {
    pub system: TorusSystem,
    pub search: OrbitSearch,
    /// Per orbit: CZ index, closed-form monodromy deviation and `det M`.
    pub indices: Vec<i64>,
    pub monodromy_error: Vec<f64>,
    pub symplectic_error: Vec<f64>,
    pub connecting: ConnectingCount,
    pub variants: Vec<FloerVariant>,
}

/// Runs the whole pipeline: orbits, monodromy checks, indices, connecting
/// trajectories, both sign conventions of the Floer complex and their
/// torsion.
pub fn run_example(b: BigRational, newton_tol: f64, opts: &TorsionOptions) -> Result<TorusReport, TorusError> {
    let system = TorusSystem::new(b)?;
    let search = system.find_orbits(newton_tol, DEFAULT_GRID)?;
    if search.orbits.len() != 2 {
        return Err(TorusError::OrbitCount(search.orbits.len()));
    }
    let mut indices = Vec::new();
    let mut monodromy_error = Vec::new();
    let mut symplectic_error = Vec::new();
    for o in &search.orbits {
        if !o.is_nondegenerate() {
            return Err(TorusError::Degenerate { gap: o.det_i_minus_m.abs() });
        }
        let path = system.linearized_path(Vector2::new(o.x, o.y), STEPS_PER_PERIOD);
        indices.push(conley_zehnder(&path)?);
        let closed = system.closed_form_monodromy(o.x);
        monodromy_error.push((o.monodromy - closed).abs().max());
        symplectic_error.push((o.monodromy.determinant() - 1.0).abs());
    }
    let connecting = system.count_connecting()?;
    let graded: Vec<(PeriodicOrbit, i64)> = search.orbits.iter().cloned().zip(indices.iter().copied()).collect();
    let mut variants = Vec::new();
    for convention in [SignConvention::Unsigned, SignConvention::Alternating] {
        let complex = assemble_floer(&graded, &connecting, convention)?;
        let torsion = torus_torsion(&complex, opts)?;
        variants.push(FloerVariant {
            convention,
            complex,
            torsion,
        });
    }
    Ok(TorusReport {
        system,
        search,
        indices,
        monodromy_error,
        symplectic_error,
        connecting,
        variants,
    })
}
