//! Time evolution of a complex amplitude over a uniform phase grid under
//! the tilted washboard,
//!
//! `i·ħ·∂ψ/∂t = −(ħ²/D)·∂²ψ/∂x² + V(x)·ψ`,
//!
//! with two finite-difference families: the schemes exactly as they were
//! originally written down ("as printed"), which misbehave, and textbook
//! Crank-Nicolson / DuFort-Frankel updates for trustworthy runs.

use num_complex::Complex64;

use crate::error::{ensure_positive, CdwError, Result};
use crate::model::{washboard_unchecked, FieldDriveParams, PhysicalParams};
use crate::table::CurveTable;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const TWO_PI: f64 = std::f64::consts::TAU;

/// Complex amplitude sampled at `x0 + j·dx`, `j = 0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub values: Vec<Complex64>,
    pub dx: f64,
    pub x0: f64,
}

impl ComplexField {
    pub fn new(values: Vec<Complex64>, dx: f64, x0: f64) -> Result<Self> {
        if values.len() < 3 {
            return Err(CdwError::domain(format!(
                "field needs at least 3 grid points, got {}",
                values.len()
            )));
        }
        ensure_positive("dx", dx)?;
        if !x0.is_finite() {
            return Err(CdwError::domain("x0 must be finite"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CdwError::domain("field amplitudes must be finite"));
        }
        Ok(ComplexField { values, dx, x0 })
    }

    pub fn zeros(n: usize, dx: f64, x0: f64) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); n], dx, x0)
    }

    /// Unit-norm packet `∝ exp(−alpha0·(x − x_c)²)` on `n` points spanning
    /// `[x_min, x_max]`.
    pub fn gaussian_packet(n: usize, x_min: f64, x_max: f64, x_c: f64, alpha0: f64) -> Result<Self> {
        if n < 3 {
            return Err(CdwError::domain("packet needs at least 3 grid points"));
        }
        ensure_positive("alpha0", alpha0)?;
        if !(x_max > x_min) {
            return Err(CdwError::domain("x_max must exceed x_min"));
        }
        let dx = (x_max - x_min) / (n - 1) as f64;
        let values = (0..n)
            .map(|j| {
                let u = x_min + j as f64 * dx - x_c;
                Complex64::new((-alpha0 * u * u).exp(), 0.0)
            })
            .collect();
        let mut f = Self::new(values, dx, x_min)?;
        let scale = 1.0 / f.norm().sqrt();
        f.values.iter_mut().for_each(|v| *v *= scale);
        Ok(f)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }

    /// Discrete `Σ |ψ_j|²·dx`.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.dx
    }

    fn same_grid(&self, other: &ComplexField) -> Result<()> {
        if self.len() != other.len() || self.dx != other.dx || self.x0 != other.x0 {
            return Err(CdwError::domain("time levels live on different grids"));
        }
        Ok(())
    }

    fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CdwError::Overflow { step: 1 });
        }
        Ok(ComplexField {
            values,
            dx: self.dx,
            x0: self.x0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    CrankNicolsonAsPrinted,
    DufortFrankelAsPrinted,
    CrankNicolsonStandard,
    DufortFrankelStandard,
}

impl SchemeKind {
    pub fn is_standard(self) -> bool {
        matches!(
            self,
            SchemeKind::CrankNicolsonStandard | SchemeKind::DufortFrankelStandard
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::CrankNicolsonAsPrinted => "cn-printed",
            SchemeKind::DufortFrankelAsPrinted => "df-printed",
            SchemeKind::CrankNicolsonStandard => "cn-standard",
            SchemeKind::DufortFrankelStandard => "df-standard",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            SchemeKind::CrankNicolsonAsPrinted,
            SchemeKind::DufortFrankelAsPrinted,
            SchemeKind::CrankNicolsonStandard,
            SchemeKind::DufortFrankelStandard,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// End points frozen at their initial values.
    #[default]
    Dirichlet,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepOptions {
    pub boundary: Boundary,
    /// Fixed-point sweeps used to resolve the implicit level in the
    /// as-printed Crank-Nicolson update.
    pub jacobi_sweeps: usize,
}

impl Default for StepOptions {
    fn default() -> Self {
        StepOptions {
            boundary: Boundary::Dirichlet,
            jacobi_sweeps: 1,
        }
    }
}

fn potential(f: &ComplexField, p: &PhysicalParams) -> Vec<f64> {
    (0..f.len()).map(|j| washboard_unchecked(f.x(j), p)).collect()
}

/// Indices updated by a stepper and neighbour lookup for each boundary mode.
struct Stencil {
    n: usize,
    periodic: bool,
}

impl Stencil {
    fn new(n: usize, b: Boundary) -> Self {
        Stencil {
            n,
            periodic: b == Boundary::Periodic,
        }
    }

    fn interior(&self) -> std::ops::Range<usize> {
        if self.periodic {
            0..self.n
        } else {
            1..self.n - 1
        }
    }

    #[inline]
    fn left(&self, j: usize) -> usize {
        if j == 0 {
            self.n - 1
        } else {
            j - 1
        }
    }

    #[inline]
    fn right(&self, j: usize) -> usize {
        if j + 1 == self.n {
            0
        } else {
            j + 1
        }
    }

    #[inline]
    fn laplacian(&self, v: &[Complex64], j: usize) -> Complex64 {
        v[self.right(j)] + v[self.left(j)] - 2.0 * v[j]
    }
}

fn check_step(prev: &ComplexField, curr: &ComplexField, p: &PhysicalParams, dt: f64) -> Result<()> {
    prev.same_grid(curr)?;
    p.validate()?;
    ensure_positive("dt", dt)
}

/// Three-level update with the two-level averaged Laplacian, the level
/// `n+1` on the right-hand side resolved by `jacobi_sweeps` fixed-point
/// sweeps seeded with level `n`.
pub fn step_crank_nicolson_printed(
    prev: &ComplexField,
    curr: &ComplexField,
    p: &PhysicalParams,
    dt: f64,
) -> Result<ComplexField> {
    step_crank_nicolson_printed_with(prev, curr, p, dt, StepOptions::default())
}

pub fn step_crank_nicolson_printed_with(
    prev: &ComplexField,
    curr: &ComplexField,
    p: &PhysicalParams,
    dt: f64,
    opts: StepOptions,
) -> Result<ComplexField> {
    check_step(prev, curr, p, dt)?;
    let v = potential(curr, p);
    let st = Stencil::new(curr.len(), opts.boundary);
    let c = I * dt * p.hbar / (p.d * curr.dx * curr.dx);
    let (pv, cv) = (&prev.values, &curr.values);

    // explicit part is the same in every sweep
    let mut base = cv.clone();
    for j in st.interior() {
        base[j] = pv[j] + c * st.laplacian(cv, j) - I * dt * 2.0 * v[j] / p.hbar * cv[j];
    }
    let mut iterate = cv.clone();
    for _ in 0..opts.jacobi_sweeps.max(1) {
        let mut next = iterate.clone();
        for j in st.interior() {
            next[j] = base[j] + c * st.laplacian(&iterate, j);
        }
        iterate = next;
    }
    curr.with_values(iterate)
}

/// `new_j = [2R/(1+2R)]·(curr_{j−1} − curr_{j+1}) + [(1−2R)/(1+2R)]·prev_j
///          − i·dt·(V_j/ħ)·curr_j` with `R = −i·dt·ħ/(2·D·dx²)`.
pub fn step_dufort_frankel_printed(
    prev: &ComplexField,
    curr: &ComplexField,
    p: &PhysicalParams,
    dt: f64,
) -> Result<ComplexField> {
    step_dufort_frankel_printed_with(prev, curr, p, dt, StepOptions::default())
}

pub fn step_dufort_frankel_printed_with(
    prev: &ComplexField,
    curr: &ComplexField,
    p: &PhysicalParams,
    dt: f64,
    opts: StepOptions,
) -> Result<ComplexField> {
    check_step(prev, curr, p, dt)?;
    let v = potential(curr, p);
    let st = Stencil::new(curr.len(), opts.boundary);
    let r = -I * dt * p.hbar / (2.0 * p.d * curr.dx * curr.dx);
    let neighbour = 2.0 * r / (1.0 + 2.0 * r);
    let lag = (1.0 - 2.0 * r) / (1.0 + 2.0 * r);
    let (pv, cv) = (&prev.values, &curr.values);
    let mut out = cv.clone();
    for j in st.interior() {
        out[j] = neighbour * (cv[st.left(j)] - cv[st.right(j)]) + lag * pv[j]
            - I * dt * v[j] / p.hbar * cv[j];
    }
    curr.with_values(out)
}

/// Textbook schemes. `prev` is ignored by the two-level Crank-Nicolson.
pub fn step_standard(
    kind: SchemeKind,
    prev: &ComplexField,
    curr: &ComplexField,
    p: &PhysicalParams,
    dt: f64,
) -> Result<ComplexField> {
    step_standard_with(kind, prev, curr, p, dt, StepOptions::default())
}

pub fn step_standard_with(
    kind: SchemeKind,
    prev: &ComplexField,
    curr: &ComplexField,
    p: &PhysicalParams,
    dt: f64,
    opts: StepOptions,
) -> Result<ComplexField> {
    match kind {
        SchemeKind::CrankNicolsonStandard => crank_nicolson_standard(prev, curr, p, dt, opts),
        SchemeKind::DufortFrankelStandard => dufort_frankel_standard(prev, curr, p, dt, opts),
        other => Err(CdwError::domain(format!(
            "{} is not a standard scheme",
            other.name()
        ))),
    }
}

/// Dispatch on any scheme.
pub fn step(
    kind: SchemeKind,
    prev: &ComplexField,
    curr: &ComplexField,
    p: &PhysicalParams,
    dt: f64,
    opts: StepOptions,
) -> Result<ComplexField> {
    match kind {
        SchemeKind::CrankNicolsonAsPrinted => step_crank_nicolson_printed_with(prev, curr, p, dt, opts),
        SchemeKind::DufortFrankelAsPrinted => step_dufort_frankel_printed_with(prev, curr, p, dt, opts),
        _ => step_standard_with(kind, prev, curr, p, dt, opts),
    }
}

fn dufort_frankel_standard(
    prev: &ComplexField,
    curr: &ComplexField,
    p: &PhysicalParams,
    dt: f64,
    opts: StepOptions,
) -> Result<ComplexField> {
    check_step(prev, curr, p, dt)?;
    let v = potential(curr, p);
    let st = Stencil::new(curr.len(), opts.boundary);
    let s = 2.0 * I * dt * p.hbar / (p.d * curr.dx * curr.dx);
    let denom = 1.0 / (1.0 + s);
    let (pv, cv) = (&prev.values, &curr.values);
    let mut out = cv.clone();
    for j in st.interior() {
        out[j] = (s * (cv[st.left(j)] + cv[st.right(j)]) + (1.0 - s) * pv[j]
            - 2.0 * I * dt * v[j] / p.hbar * cv[j])
            * denom;
    }
    curr.with_values(out)
}

fn crank_nicolson_standard(
    prev: &ComplexField,
    curr: &ComplexField,
    p: &PhysicalParams,
    dt: f64,
    opts: StepOptions,
) -> Result<ComplexField> {
    check_step(prev, curr, p, dt)?;
    let v = potential(curr, p);
    let n = curr.len();
    let kappa = I * dt / (2.0 * p.hbar);
    let beta = p.hbar * p.hbar / (p.d * curr.dx * curr.dx);
    let off = -kappa * beta;
    let cv = &curr.values;
    let st = Stencil::new(n, opts.boundary);

    match opts.boundary {
        Boundary::Dirichlet => {
            let m = n - 2;
            let mut diag = Vec::with_capacity(m);
            let mut rhs = Vec::with_capacity(m);
            for j in 1..n - 1 {
                let h = 2.0 * beta + v[j];
                diag.push(1.0 + kappa * h);
                rhs.push((1.0 - kappa * h) * cv[j] + kappa * beta * (cv[j + 1] + cv[j - 1]));
            }
            // frozen end values enter both time levels
            rhs[0] += kappa * beta * cv[0];
            rhs[m - 1] += kappa * beta * cv[n - 1];
            let sol = solve_tridiagonal(off, &diag, off, &rhs);
            let mut out = cv.clone();
            out[1..n - 1].copy_from_slice(&sol);
            curr.with_values(out)
        }
        Boundary::Periodic => {
            let mut diag = Vec::with_capacity(n);
            let mut rhs = Vec::with_capacity(n);
            for j in 0..n {
                let h = 2.0 * beta + v[j];
                diag.push(1.0 + kappa * h);
                rhs.push((1.0 - kappa * h) * cv[j] + kappa * beta * (cv[st.right(j)] + cv[st.left(j)]));
            }
            let sol = solve_cyclic_tridiagonal(off, &diag, off, &rhs);
            curr.with_values(sol)
        }
    }
}

/// Thomas algorithm for a constant off-diagonal tridiagonal system.
fn solve_tridiagonal(lower: Complex64, diag: &[Complex64], upper: Complex64, rhs: &[Complex64]) -> Vec<Complex64> {
    let m = diag.len();
    let mut c = vec![Complex64::new(0.0, 0.0); m];
    let mut d = vec![Complex64::new(0.0, 0.0); m];
    c[0] = upper / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..m {
        let denom = diag[i] - lower * c[i - 1];
        c[i] = upper / denom;
        d[i] = (rhs[i] - lower * d[i - 1]) / denom;
    }
    let mut x = d;
    for i in (0..m - 1).rev() {
        let next = x[i + 1];
        x[i] -= c[i] * next;
    }
    x
}

/// Sherman-Morrison reduction of the cyclic system to two Thomas solves.
fn solve_cyclic_tridiagonal(
    lower: Complex64,
    diag: &[Complex64],
    upper: Complex64,
    rhs: &[Complex64],
) -> Vec<Complex64> {
    let m = diag.len();
    let gamma = -diag[0];
    let mut bb = diag.to_vec();
    bb[0] -= gamma;
    bb[m - 1] -= upper * lower / gamma;
    let x = solve_tridiagonal(lower, &bb, upper, rhs);
    let mut u = vec![Complex64::new(0.0, 0.0); m];
    u[0] = gamma;
    u[m - 1] = upper;
    let z = solve_tridiagonal(lower, &bb, upper, &u);
    let fact = (x[0] + lower * x[m - 1] / gamma) / (1.0 + z[0] + lower * z[m - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

/// Per-step record of an evolution run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub mean_phase: Vec<f64>,
    pub norm: Vec<f64>,
    /// Step at which a non-finite amplitude ended the run.
    pub truncated_at: Option<usize>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated_at.is_some()
    }

    fn push(&mut self, t: f64, f: &ComplexField) {
        let norm = f.norm();
        // a vanishing field has no centroid; record 0 so the row stays numeric
        let phase = mean_phase(f).unwrap_or(0.0);
        self.times.push(t);
        self.mean_phase.push(phase);
        self.norm.push(norm);
    }

    pub fn to_table(&self) -> CurveTable {
        let mut table = CurveTable::new(["t", "mean_phase", "norm"]);
        for i in 0..self.len() {
            table
                .push_row(vec![self.times[i], self.mean_phase[i], self.norm[i]])
                .expect("fixed arity");
        }
        table
    }
}

/// Runs `steps` updates from `init`. Before each update the driving phase
/// is set to `a_D·t` at the current level's time. Three-level schemes get
/// their second level from one standard Crank-Nicolson step.
pub fn evolve(
    kind: SchemeKind,
    init: &ComplexField,
    p: &PhysicalParams,
    drive: &FieldDriveParams,
    dt: f64,
    steps: usize,
) -> Result<Trajectory> {
    evolve_with(kind, init, p, drive, dt, steps, StepOptions::default())
}

pub fn evolve_with(
    kind: SchemeKind,
    init: &ComplexField,
    p: &PhysicalParams,
    drive: &FieldDriveParams,
    dt: f64,
    steps: usize,
    opts: StepOptions,
) -> Result<Trajectory> {
    if steps == 0 {
        return Err(CdwError::domain("steps must be >= 1"));
    }
    ensure_positive("dt", dt)?;
    p.validate()?;

    let mut traj = Trajectory::default();
    traj.push(0.0, init);
    let mut prev = init.clone();
    let mut curr = init.clone();

    for n in 0..steps {
        let t = n as f64 * dt;
        let pn = p.with_theta(drive.theta_at(t));
        let result = if n == 0 {
            step_standard_with(SchemeKind::CrankNicolsonStandard, &prev, &curr, &pn, dt, opts)
        } else {
            step(kind, &prev, &curr, &pn, dt, opts)
        };
        match result {
            Ok(next) => {
                prev = std::mem::replace(&mut curr, next);
                traj.push((n + 1) as f64 * dt, &curr);
            }
            Err(CdwError::Overflow { .. }) => {
                traj.truncated_at = Some(n + 1);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(traj)
}

/// Smallest `dt` at which the explicit leapfrog core of the as-printed
/// Crank-Nicolson update loses stability on this grid, times `margin`.
pub fn printed_instability_dt(p: &PhysicalParams, dx: f64, margin: f64) -> f64 {
    margin * p.d * dx * dx / (4.0 * p.hbar)
}

/// `Σ x_j |ψ_j|² / Σ |ψ_j|²`.
pub fn mean_phase(f: &ComplexField) -> Result<f64> {
    let mut w = 0.0;
    let mut wx = 0.0;
    for (j, v) in f.values.iter().enumerate() {
        let p = v.norm_sqr();
        w += p;
        wx += p * f.x(j);
    }
    if !(w > 0.0) || !w.is_finite() {
        return Err(CdwError::domain("mean phase of a field with zero norm"));
    }
    Ok(wx / w)
}

/// First index whose norm exceeds `factor` times the initial norm.
pub fn detect_blowup(t: &Trajectory, factor: f64) -> Option<usize> {
    let first = *t.norm.first()?;
    t.norm
        .iter()
        .position(|&n| !n.is_finite() || n > factor * first)
}

/// Oscillation without barrier crossing over the trailing `window` rows:
/// at least two local extrema of the mean phase and `max |mean phase| < 2π`.
pub fn detect_resonance(t: &Trajectory, window: usize) -> bool {
    if window < 4 || t.len() < window {
        return false;
    }
    let tail = &t.mean_phase[t.len() - window..];
    if tail.iter().any(|v| !v.is_finite()) {
        return false;
    }
    let max_abs = tail.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    max_abs < TWO_PI && count_extrema(tail) >= 2
}

fn count_extrema(values: &[f64]) -> usize {
    let mut collapsed: Vec<f64> = Vec::with_capacity(values.len());
    for &v in values {
        if collapsed.last() != Some(&v) {
            collapsed.push(v);
        }
    }
    collapsed
        .windows(3)
        .filter(|w| (w[1] > w[0] && w[1] > w[2]) || (w[1] < w[0] && w[1] < w[2]))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn free_params() -> PhysicalParams {
        PhysicalParams {
            d: 2.0,
            omega_p_sq: 0.0,
            mu_e: 0.0,
            ..Default::default()
        }
    }

    fn constant(n: usize, v: Complex64) -> ComplexField {
        ComplexField::new(vec![v; n], 0.1, -1.0).unwrap()
    }

    fn impulse(n: usize, at: usize) -> ComplexField {
        let mut f = ComplexField::zeros(n, 0.1, 0.0).unwrap();
        f.values[at] = c(1.0, 0.0);
        f
    }

    /// Random-ish but reproducible complex field.
    fn scrambled(n: usize) -> ComplexField {
        let values = (0..n)
            .map(|j| {
                let x = j as f64;
                c((1.3 * x).sin() + 0.2, (0.7 * x + 0.4).cos())
            })
            .collect();
        ComplexField::new(values, 0.05, -0.3).unwrap()
    }

    #[test]
    fn field_validation() {
        assert!(ComplexField::zeros(2, 0.1, 0.0).is_err());
        assert!(ComplexField::zeros(5, 0.0, 0.0).is_err());
        assert!(ComplexField::new(vec![c(f64::NAN, 0.0); 4], 0.1, 0.0).is_err());
        let g = ComplexField::gaussian_packet(201, -5.0, 5.0, 0.0, 1.0).unwrap();
        assert!((g.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn printed_cn_zero_and_constant() {
        let p = free_params();
        let z = ComplexField::zeros(9, 0.1, 0.0).unwrap();
        assert_eq!(step_crank_nicolson_printed(&z, &z, &p, 0.01).unwrap(), z);
        let k = constant(9, c(0.3, -0.7));
        let out = step_crank_nicolson_printed(&k, &k, &p, 0.01).unwrap();
        for v in &out.values {
            assert!((v - c(0.3, -0.7)).norm() < 1e-15);
        }
    }

    /// Independent evaluation of the as-printed update as explicit matrices.
    /// One sweep seeded with curr gives new = prev + A·curr + B·curr, where A
    /// carries the level-n terms and B the level-(n+1) Laplacian.
    fn printed_cn_matrix_form(prev: &ComplexField, curr: &ComplexField, p: &PhysicalParams, dt: f64) -> Vec<Complex64> {
        let n = curr.len();
        let coef = I * dt * p.hbar / (p.d * curr.dx * curr.dx);
        let mut a = vec![vec![c(0.0, 0.0); n]; n];
        let mut b = vec![vec![c(0.0, 0.0); n]; n];
        for j in 1..n - 1 {
            let vj = washboard_unchecked(curr.x(j), p);
            a[j][j - 1] = coef;
            a[j][j + 1] = coef;
            a[j][j] = -2.0 * coef - I * dt * 2.0 * vj / p.hbar;
            b[j][j - 1] = coef;
            b[j][j + 1] = coef;
            b[j][j] = -2.0 * coef;
        }
        let matvec = |m: &Vec<Vec<Complex64>>, v: &[Complex64]| -> Vec<Complex64> {
            m.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
        };
        let a_curr = matvec(&a, &curr.values);
        let b_curr = matvec(&b, &curr.values);
        (0..n)
            .map(|j| {
                if j == 0 || j == n - 1 {
                    curr.values[j]
                } else {
                    prev.values[j] + a_curr[j] + b_curr[j]
                }
            })
            .collect()
    }

    #[test]
    fn printed_cn_matches_matrix_form() {
        let p = PhysicalParams {
            theta: 0.4,
            ..PhysicalParams::default()
        };
        let prev = scrambled(12);
        let mut curr = scrambled(12);
        curr.values.rotate_left(3);
        let dt = 1e-3;
        let got = step_crank_nicolson_printed(&prev, &curr, &p, dt).unwrap();
        let want = printed_cn_matrix_form(&prev, &curr, &p, dt);
        for (g, w) in got.values.iter().zip(&want) {
            assert!((g - w).norm() < 1e-13, "{g} vs {w}");
        }
    }

    #[test]
    fn printed_cn_impulse_spreads_to_both_neighbours() {
        let p = free_params();
        let dt = 1e-4;
        let f = impulse(11, 5);
        let out = step_crank_nicolson_printed(&f, &f, &p, dt).unwrap();
        let coef = I * dt * p.hbar / (p.d * f.dx * f.dx);
        // one coefficient from each of the two time levels
        for j in [4, 6] {
            assert!((out.values[j] - 2.0 * coef).norm() < 1e-15);
        }
        assert!(out.values[3].norm() < 1e-15 && out.values[7].norm() < 1e-15);
    }

    #[test]
    fn printed_df_zero_constant_and_small_dt() {
        let p = free_params();
        let z = ComplexField::zeros(7, 0.1, 0.0).unwrap();
        assert_eq!(step_dufort_frankel_printed(&z, &z, &p, 0.1).unwrap(), z);

        let cval = c(1.0, 0.5);
        let k = constant(7, cval);
        let dt = 0.01;
        let out = step_dufort_frankel_printed(&k, &k, &p, dt).unwrap();
        let r = -I * dt * p.hbar / (2.0 * p.d * k.dx * k.dx);
        let expected = (1.0 - 2.0 * r) / (1.0 + 2.0 * r) * cval;
        for v in &out.values[1..6] {
            assert!((v - expected).norm() < 1e-15);
        }
        assert!((expected - cval).norm() > 1e-3, "printed scheme should not preserve constants");

        let prev = scrambled(9);
        let curr = constant(9, c(0.2, 0.1));
        let curr = ComplexField { x0: prev.x0, dx: prev.dx, ..curr };
        let tiny = step_dufort_frankel_printed(&prev, &curr, &PhysicalParams::default(), 1e-12).unwrap();
        for (a, b) in tiny.values[1..8].iter().zip(&prev.values[1..8]) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn printed_df_matches_term_by_term() {
        let p = PhysicalParams {
            theta: -0.3,
            ..PhysicalParams::default()
        };
        let prev = scrambled(10);
        let mut curr = scrambled(10);
        curr.values.reverse();
        let dt = 0.02;
        let got = step_dufort_frankel_printed(&prev, &curr, &p, dt).unwrap();
        for j in 1..9 {
            let rt = c(0.0, -dt * p.hbar / (2.0 * p.d * prev.dx * prev.dx));
            let v = 0.5 * p.mu_e * (curr.x(j) - p.theta).powi(2)
                + 0.5 * p.d * p.omega_p_sq * (1.0 - curr.x(j).cos());
            let want = (2.0 * rt) / (c(1.0, 0.0) + 2.0 * rt) * (curr.values[j - 1] - curr.values[j + 1])
                + (c(1.0, 0.0) - 2.0 * rt) / (c(1.0, 0.0) + 2.0 * rt) * prev.values[j]
                - c(0.0, dt * v / p.hbar) * curr.values[j];
            assert!((got.values[j] - want).norm() < 1e-13);
        }
    }

    #[test]
    fn standard_schemes_basic() {
        let p = free_params();
        let z = ComplexField::zeros(8, 0.1, 0.0).unwrap();
        for kind in [SchemeKind::CrankNicolsonStandard, SchemeKind::DufortFrankelStandard] {
            assert_eq!(step_standard(kind, &z, &z, &p, 0.1).unwrap(), z);
        }
        let k = constant(8, c(-0.4, 0.9));
        let out = step_standard(SchemeKind::DufortFrankelStandard, &k, &k, &p, 0.37).unwrap();
        for v in &out.values {
            assert!((v - c(-0.4, 0.9)).norm() < 1e-15);
        }
        assert!(step_standard(SchemeKind::CrankNicolsonAsPrinted, &k, &k, &p, 0.1).is_err());
    }

    #[test]
    fn cn_standard_is_unitary() {
        let p = free_params();
        let mut f = ComplexField::gaussian_packet(401, -20.0, 20.0, 0.0, 1.0).unwrap();
        let n0 = f.norm();
        for _ in 0..1000 {
            f = step_standard(SchemeKind::CrankNicolsonStandard, &f, &f, &p, 0.01).unwrap();
        }
        assert!((f.norm() - n0).abs() < 1e-10, "drift {}", (f.norm() - n0).abs());
    }

    #[test]
    fn periodic_cn_is_unitary_and_translation_invariant() {
        let p = free_params();
        let opts = StepOptions {
            boundary: Boundary::Periodic,
            ..Default::default()
        };
        let f = scrambled(32);
        let n0 = f.norm();
        let g = step_standard_with(SchemeKind::CrankNicolsonStandard, &f, &f, &p, 0.05, opts).unwrap();
        assert!((g.norm() - n0).abs() < 1e-12);
        let mut shifted = f.clone();
        shifted.values.rotate_left(5);
        let gs = step_standard_with(SchemeKind::CrankNicolsonStandard, &shifted, &shifted, &p, 0.05, opts).unwrap();
        let mut g_rot = g.values.clone();
        g_rot.rotate_left(5);
        for (a, b) in gs.values.iter().zip(&g_rot) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn boundaries_are_frozen() {
        let p = PhysicalParams::default();
        let prev = scrambled(16);
        let curr = scrambled(16);
        for kind in [
            SchemeKind::CrankNicolsonAsPrinted,
            SchemeKind::DufortFrankelAsPrinted,
            SchemeKind::CrankNicolsonStandard,
            SchemeKind::DufortFrankelStandard,
        ] {
            let out = step(kind, &prev, &curr, &p, 0.01, StepOptions::default()).unwrap();
            assert_eq!(out.values[0], curr.values[0], "{kind:?}");
            assert_eq!(out.values[15], curr.values[15], "{kind:?}");
        }
    }

    #[test]
    fn single_step_converges_linearly_to_identity() {
        let p = PhysicalParams::default();
        let f = scrambled(20);
        for kind in [
            SchemeKind::CrankNicolsonAsPrinted,
            SchemeKind::DufortFrankelAsPrinted,
            SchemeKind::CrankNicolsonStandard,
            SchemeKind::DufortFrankelStandard,
        ] {
            let dist = |dt: f64| {
                let out = step(kind, &f, &f, &p, dt, StepOptions::default()).unwrap();
                out.values.iter().zip(&f.values).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
            };
            let (d1, d2) = (dist(1e-7), dist(2e-7));
            assert!(d1 < 1e-3, "{kind:?}");
            assert!((d2 / d1 - 2.0).abs() < 1e-3, "{kind:?} ratio {}", d2 / d1);
        }
    }

    #[test]
    fn mismatched_grids_rejected() {
        let p = PhysicalParams::default();
        let a = ComplexField::zeros(8, 0.1, 0.0).unwrap();
        let b = ComplexField::zeros(9, 0.1, 0.0).unwrap();
        assert!(matches!(
            step_crank_nicolson_printed(&a, &b, &p, 0.1),
            Err(CdwError::Domain(_))
        ));
    }

    #[test]
    fn overflow_reported() {
        let p = free_params();
        let f = constant(5, c(1e308, 0.0));
        let g = ComplexField { values: vec![c(1e308, 0.0), c(-1e308, 0.0), c(1e308, 0.0), c(-1e308, 0.0), c(1e308, 0.0)], ..f.clone() };
        assert!(matches!(
            step_crank_nicolson_printed(&g, &g, &p, 1.0),
            Err(CdwError::Overflow { .. })
        ));
    }

    #[test]
    fn mean_phase_examples() {
        let n = 101;
        let dx = 4.0 * std::f64::consts::PI / (n - 1) as f64;
        let mut f = ComplexField::zeros(n, dx, -2.0 * std::f64::consts::PI).unwrap();
        f.values[n - 1] = c(0.0, 3.0);
        assert!((mean_phase(&f).unwrap() - TWO_PI).abs() < 1e-12);

        let sym = ComplexField::gaussian_packet(101, -5.0, 5.0, 0.0, 0.7).unwrap();
        assert!(mean_phase(&sym).unwrap().abs() < 1e-14);

        let mut two = ComplexField::zeros(n, dx, -2.0 * std::f64::consts::PI).unwrap();
        two.values[50] = c(1.0, 0.0);
        two.values[n - 1] = c(0.0, -1.0);
        assert!((mean_phase(&two).unwrap() - std::f64::consts::PI).abs() < 1e-12);

        assert!(mean_phase(&ComplexField::zeros(5, 0.1, 0.0).unwrap()).is_err());
    }

    fn traj_from(norms: &[f64], phases: &[f64]) -> Trajectory {
        Trajectory {
            times: (0..norms.len()).map(|i| i as f64).collect(),
            mean_phase: phases.to_vec(),
            norm: norms.to_vec(),
            truncated_at: None,
        }
    }

    #[test]
    fn blowup_examples() {
        let flat = traj_from(&[1.0; 6], &[0.0; 6]);
        assert_eq!(detect_blowup(&flat, 10.0), None);
        let t = traj_from(&[1.0, 2.0, 20.0], &[0.0; 3]);
        assert_eq!(detect_blowup(&t, 10.0), Some(2));
    }

    #[test]
    fn resonance_examples() {
        let drift: Vec<f64> = (0..50).map(|i| i as f64 * 0.2).collect();
        assert!(!detect_resonance(&traj_from(&vec![1.0; 50], &drift), 50));
        let osc: Vec<f64> = (0..200).map(|i| std::f64::consts::PI * (i as f64 * 0.1).sin()).collect();
        assert!(detect_resonance(&traj_from(&vec![1.0; 200], &osc), 200));
        assert!(!detect_resonance(&traj_from(&[1.0; 3], &osc[..3]), 3));
    }

    #[test]
    fn evolve_zero_field() {
        let z = ComplexField::zeros(9, 0.1, 0.0).unwrap();
        let t = evolve(
            SchemeKind::CrankNicolsonStandard,
            &z,
            &PhysicalParams::default(),
            &FieldDriveParams::default(),
            0.01,
            1,
        )
        .unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.norm, vec![0.0, 0.0]);
        assert!(!t.is_truncated());
    }

    #[test]
    fn evolve_stable_static_theta_oscillates() {
        let p = PhysicalParams::default();
        let drive = FieldDriveParams { a_d: 0.0, ..Default::default() };
        let init = ComplexField::gaussian_packet(257, -4.0 * std::f64::consts::PI, 4.0 * std::f64::consts::PI, 1.0, 1.0).unwrap();
        let t = evolve(SchemeKind::DufortFrankelStandard, &init, &p, &drive, 0.01, 1500).unwrap();
        assert!(!t.is_truncated());
        assert!(detect_resonance(&t, t.len()));
        assert_eq!(detect_blowup(&t, 10.0), None);
    }

    #[test]
    fn printed_cn_blows_up_past_its_stability_limit() {
        let p = PhysicalParams::default();
        let drive = FieldDriveParams { a_d: 0.0, ..Default::default() };
        let init = ComplexField::gaussian_packet(257, -4.0 * std::f64::consts::PI, 4.0 * std::f64::consts::PI, 1.0, 1.0).unwrap();
        let dt = printed_instability_dt(&p, init.dx, 1.05);
        let t = evolve(SchemeKind::CrankNicolsonAsPrinted, &init, &p, &drive, dt, 1000).unwrap();
        let at = detect_blowup(&t, 10.0).expect("as-printed scheme should blow up");
        assert!(at <= 1000);
        // below the limit the same run stays bounded
        let calm = evolve(SchemeKind::CrankNicolsonAsPrinted, &init, &p, &drive, 0.5 * dt, 1000).unwrap();
        assert_eq!(detect_blowup(&calm, 10.0), None);
    }

    #[test]
    fn trajectory_table_header() {
        let t = traj_from(&[1.0, 1.0], &[0.0, 0.1]);
        let table = t.to_table();
        assert_eq!(table.columns(), &["t", "mean_phase", "norm"]);
        assert_eq!(table.rows().len(), 2);
    }
}
