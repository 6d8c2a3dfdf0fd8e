//! The verification battery: ten checks with fixed tolerances, shared by the
//! `verify` command and the acceptance test target.

use std::time::Instant;

use crtool_core::classify::classify;
use crtool_core::crframe::{levi_null_basis, levi_report};
use crtool_core::domains::{
    is_smooth_boundary_point, sample_boundary_point, BoundaryPoint, DomainModel, ModelKind, Provenance,
};
use crtool_core::foliation::{leaf_frame, leaf_point};
use crtool_core::maps::{apply_map, cr_transversality_check, MapSpec, Phi};
use crtool_core::nu::{
    kernel_dim_in, nondegeneracy_rank, nu_closed_form, nu_estimate, nu_search, r_tensor_numeric, tensor_r_closed,
    tensor_r_numeric, NuConfig,
};
use crtool_core::numerics::{
    add_vec, max_principal_angle, norm, orthonormalize, project_out, rank_with_tol, scale_vec, singular_values,
    sub_vec, ComplexMatrix, TolerancePolicy, C64,
};
use crtool_core::rng::SeededRng;
use serde_json::{json, Value};

/// The golden classifier table: `kind m n n_plus transversal minimal verdict`.
pub const CLASSIFY_GOLDEN: &str = include_str!("../golden/classify.tsv");

const MAX_FAILURES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    /// The full battery at acceptance scale.
    Paper,
    /// A reduced battery for quick runs.
    Quick,
}

impl SuiteKind {
    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Paper => "paper",
            SuiteKind::Quick => "quick",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper" => Some(SuiteKind::Paper),
            "quick" => Some(SuiteKind::Quick),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Scale {
    max_dim: usize,
    signature_points: u64,
    nu_seeds: u64,
    foliation_points: u64,
    tensor_points: u64,
    kernel_max: usize,
    kernel_samples: usize,
    unitaries: u64,
    cayley_points: u64,
    embed_points: u64,
}

impl Scale {
    fn of(kind: SuiteKind) -> Self {
        match kind {
            SuiteKind::Paper => Scale {
                max_dim: 6,
                signature_points: 500,
                nu_seeds: 5,
                foliation_points: 10,
                tensor_points: 3,
                kernel_max: 5,
                kernel_samples: 50,
                unitaries: 20,
                cayley_points: 100,
                embed_points: 20,
            },
            SuiteKind::Quick => Scale {
                max_dim: 5,
                signature_points: 50,
                nu_seeds: 2,
                foliation_points: 4,
                tensor_points: 1,
                kernel_max: 4,
                kernel_samples: 10,
                unitaries: 3,
                cayley_points: 20,
                embed_points: 4,
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub tolerance: &'static str,
    /// Deterministic for a given seed.
    pub values: Value,
    pub failures: Vec<String>,
    pub runtime_s: f64,
}

impl Check {
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "name": self.name,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "values": self.values,
            "failures": self.failures,
            "runtime_s": self.runtime_s,
        })
    }

    pub fn summary_line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut line = format!("[{status}] {:>2} {} ({:.1}s; {})", self.id, self.name, self.runtime_s, self.tolerance);
        if let Some(f) = self.failures.first() {
            line.push_str(&format!(" first failure: {f}"));
        }
        line
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: SuiteKind,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "seed": self.seed,
            "passed": self.passed(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        })
    }
}

pub const CHECK_IDS: std::ops::RangeInclusive<u32> = 1..=10;

pub fn run_suite(kind: SuiteKind, seed: u64) -> Report {
    Report { suite: kind, seed, checks: CHECK_IDS.map(|id| run_check(id, kind, seed)).collect() }
}

pub fn run_check(id: u32, kind: SuiteKind, seed: u64) -> Check {
    let scale = Scale::of(kind);
    let start = Instant::now();
    let mut log = Log::default();
    let (name, tolerance, values) = match id {
        1 => (
            "signature table",
            "integer-exact; rank tol 1e-10; runtime < 60 s",
            signature_table(&scale, seed, &mut log),
        ),
        2 => {
            ("nu table", "integer-exact; search with 200 samples equals closed form", nu_table(&scale, seed, &mut log))
        }
        3 => ("foliation consistency", "angle < 1e-6; leaf residual < 1e-10", foliation(&scale, seed, &mut log)),
        4 => (
            "tensor R",
            "closed/numeric < 1e-7 rel; linearity < 1e-7; leaf directions < 1e-8",
            tensor(&scale, seed, &mut log),
        ),
        5 => ("kind I kernel law", "integer-exact", kernel_law(&scale, seed, &mut log)),
        6 => ("unitary invariance", "integer-exact", invariance(&scale, seed, &mut log)),
        7 => ("tube to IV map", "|rho| < 1e-8; sigma_min > 1e-6; nu 0 -> 0", cayley(&scale, seed, &mut log)),
        8 => ("nondegeneracy ranks", "integer-exact", ranks(&scale, &mut log)),
        9 => ("embedding algebra", "membership and transversality", embeddings(&scale, seed, &mut log)),
        10 => ("classifier golden table", "byte-exact", golden(&mut log)),
        _ => ("unknown", "", {
            log.fail(format!("no check with id {id}"));
            Value::Null
        }),
    };
    let runtime_s = start.elapsed().as_secs_f64();
    if id == 1 && kind == SuiteKind::Paper && runtime_s >= 60.0 {
        log.fail(format!("runtime {runtime_s:.1} s exceeds 60 s"));
    }
    Check { id, name, passed: log.failures.is_empty(), tolerance, values, failures: log.truncated(), runtime_s }
}

#[derive(Default)]
struct Log {
    failures: Vec<String>,
}

impl Log {
    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }

    fn require(&mut self, ok: bool, msg: impl FnOnce() -> String) -> bool {
        if !ok {
            self.fail(msg());
        }
        ok
    }

    fn truncated(&self) -> Vec<String> {
        let mut out: Vec<String> = self.failures.iter().take(MAX_FAILURES).cloned().collect();
        if self.failures.len() > MAX_FAILURES {
            out.push(format!("... and {} more", self.failures.len() - MAX_FAILURES));
        }
        out
    }
}

fn sub_seed(seed: u64, a: u64, b: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(a.wrapping_mul(1_000_003)).wrapping_add(b)
}

pub fn label(model: &DomainModel) -> String {
    let base = match model.kind() {
        ModelKind::I => format!("I({},{})", model.m(), model.n()),
        k => format!("{}({})", k.name(), model.m()),
    };
    if model.has_flat_line() {
        base + "xC"
    } else {
        base
    }
}

/// All models with dimensions up to `max` (kind II from 4, the tube from 3).
pub fn models_in_range(max: usize) -> Vec<DomainModel> {
    let mut out = Vec::new();
    for m in 2..=max {
        for n in 2..=max {
            out.push(DomainModel::new(ModelKind::I, m, n).expect("valid"));
        }
    }
    for m in 4..=max {
        out.push(DomainModel::new(ModelKind::II, m, 0).expect("valid"));
    }
    for m in 2..=max {
        out.push(DomainModel::new(ModelKind::III, m, 0).expect("valid"));
    }
    for m in 2..=max {
        out.push(DomainModel::new(ModelKind::IV, m, 0).expect("valid"));
    }
    for m in 3..=max {
        out.push(DomainModel::new(ModelKind::Tube, m, 0).expect("valid"));
    }
    out
}

fn unit_combo(basis: &ComplexMatrix, rng: &mut SeededRng) -> Vec<C64> {
    let x = basis.mul_vec(&rng.complex_vec(basis.cols()));
    let nx = norm(&x);
    scale_vec(&x, C64::new(1.0 / nx, 0.0))
}

fn signature_table(scale: &Scale, seed: u64, log: &mut Log) -> Value {
    let mut rows = Vec::new();
    for (mi, d) in models_in_range(scale.max_dim).iter().enumerate() {
        let want = (d.expected_positive(), d.leaf_dim(), 0);
        let mut matched = 0;
        for i in 0..scale.signature_points {
            let r = 0.18 * (i % 5) as f64;
            let res = sample_boundary_point(d, sub_seed(seed, mi as u64, i), r).and_then(|p| levi_report(&p));
            match res {
                Ok(rep) => {
                    let s = rep.signature;
                    if log.require((s.pos, s.zero, s.neg) == want, || format!("{} point {i}: {s:?}", label(d))) {
                        matched += 1;
                    }
                }
                Err(e) => log.fail(format!("{} point {i}: {e}", label(d))),
            }
        }
        rows.push(json!({"model": label(d), "expected": [want.0, want.1, want.2], "matched": matched, "total": scale.signature_points}));
    }
    Value::Array(rows)
}

fn nu_table(scale: &Scale, seed: u64, log: &mut Log) -> Value {
    let mut rows = Vec::new();
    for (mi, d) in models_in_range(scale.max_dim).iter().enumerate() {
        let want = d.expected_nu();
        let mut closed = Vec::new();
        let mut search = Vec::new();
        for s in 0..scale.nu_seeds {
            let pt = match sample_boundary_point(d, sub_seed(seed, mi as u64, s), 0.0) {
                Ok(p) => p,
                Err(e) => {
                    log.fail(format!("{}: {e}", label(d)));
                    continue;
                }
            };
            let est = nu_estimate(&pt, &NuConfig { seed: s, ..NuConfig::default() });
            let c = nu_closed_form(&pt);
            let cfg = NuConfig { samples: 200, seed: sub_seed(seed, 7, s), ..NuConfig::default() };
            let srch = nu_search(&pt, &cfg);
            match (est, c, srch) {
                (Ok(e), Ok(c), Ok(sr)) => {
                    log.require(e.nu == want && c.nu == want && sr.nu == want, || {
                        format!("{} seed {s}: estimate {} closed {} search {} want {want}", label(d), e.nu, c.nu, sr.nu)
                    });
                    closed.push(c.nu);
                    search.push(sr.nu);
                }
                (e, c, s2) => log.fail(format!("{} seed {s}: {:?} {:?} {:?}", label(d), e.err(), c.err(), s2.err())),
            }
        }
        rows.push(json!({"model": label(d), "expected": want, "closed_form": closed, "search": search}));
    }
    Value::Array(rows)
}

/// Largest multiple of the unit leaf vector `v` that keeps the leaf point
/// in the smooth part (the offsets add linearly at a base point).
fn leaf_bound(base: &BoundaryPoint, v: &[C64]) -> crtool_core::Result<f64> {
    let probe = leaf_point(base, &scale_vec(v, C64::new(0.1, 0.0)))?;
    Ok(0.1 / probe.provenance().offset_size())
}

fn foliation(scale: &Scale, seed: u64, log: &mut Log) -> Value {
    let policy = TolerancePolicy::default();
    let mut rows = Vec::new();
    for (mi, d) in models_in_range(scale.max_dim).iter().enumerate() {
        let mut rng = SeededRng::new(sub_seed(seed, 100 + mi as u64, 0));
        let mut max_angle: f64 = 0.0;
        let mut max_residual: f64 = 0.0;
        for i in 0..scale.foliation_points {
            let r = 0.85 * (i % 4) as f64 / 3.0;
            let out = (|| -> crtool_core::Result<()> {
                let pt = sample_boundary_point(d, sub_seed(seed, mi as u64, i), r)?;
                let frame = leaf_frame(&pt)?;
                let ang = max_principal_angle(&frame.leaf_basis, &levi_null_basis(&pt)?)?;
                max_angle = max_angle.max(ang);
                log.require(ang < 1e-6, || format!("{} point {i}: angle {ang:e}", label(d)));
                let base = sample_boundary_point(d, sub_seed(seed, mi as u64, i), 0.0)?;
                let bf = leaf_frame(&base)?;
                let v = unit_combo(&bf.leaf_basis, &mut rng);
                let bound = leaf_bound(&base, &v)?;
                for frac in [0.25, 0.5, 0.75, 0.99] {
                    let q = leaf_point(&base, &scale_vec(&v, C64::new(frac * bound, 0.0)))?;
                    let res = q.defining_value().abs();
                    max_residual = max_residual.max(res);
                    log.require(res < 1e-10 && is_smooth_boundary_point(&d.base(), q.ambient(), &policy), || {
                        format!("{} offset {frac}: residual {res:e}", label(d))
                    });
                }
                Ok(())
            })();
            if let Err(e) = out {
                log.fail(format!("{} point {i}: {e}", label(d)));
            }
        }
        rows.push(json!({"model": label(d), "angle_below_1e-6": max_angle < 1e-6, "residual_below_1e-10": max_residual < 1e-10}));
    }
    Value::Array(rows)
}

fn tensor(scale: &Scale, seed: u64, log: &mut Log) -> Value {
    let mut rows = Vec::new();
    let mut models = models_in_range(scale.max_dim);
    models.push(DomainModel::new(ModelKind::I, 3, 3).expect("valid").product_with_line());
    models.push(DomainModel::new(ModelKind::IV, 4, 0).expect("valid").product_with_line());
    for (mi, d) in models.iter().enumerate() {
        let mut rng = SeededRng::new(sub_seed(seed, 200 + mi as u64, 0));
        let (mut agree, mut linear, mut leafwise) = (true, true, true);
        for i in 0..scale.tensor_points {
            let out = (|| -> crtool_core::Result<()> {
                let pt = sample_boundary_point(d, sub_seed(seed, mi as u64, i), 0.0)?;
                let f = leaf_frame(&pt)?;
                let off = sample_boundary_point(d, sub_seed(seed, mi as u64, i), 0.6)?;
                let fo = leaf_frame(&off)?;
                for (p, fr) in [(&pt, &f), (&off, &fo)] {
                    let x = unit_combo(&fr.leaf_basis, &mut rng);
                    let v = unit_combo(&fr.leaf_basis, &mut rng);
                    let r = norm(&tensor_r_numeric(p, &x, &v)?.value);
                    leafwise &= log.require(r < 1e-8, || format!("{} leaf direction: {r:e}", label(d)));
                }
                if f.slice_basis.cols() == 0 {
                    return Ok(());
                }
                let x = unit_combo(&f.slice_basis, &mut rng);
                let v = unit_combo(&f.leaf_basis, &mut rng);
                let a = tensor_r_numeric(&pt, &x, &v)?.value;
                let b = tensor_r_closed(&pt, &x, &v)?.value;
                let err = norm(&sub_vec(&a, &b));
                let ok = if norm(&b) > 1e-12 { err / norm(&b) < 1e-7 } else { norm(&a) < 1e-9 };
                agree &= log.require(ok, || format!("{} closed/numeric: {err:e}", label(d)));
                for (p, fr) in [(&pt, &f), (&off, &fo)] {
                    let (x, y) = (unit_combo(&fr.slice_basis, &mut rng), unit_combo(&fr.slice_basis, &mut rng));
                    let (v, w) = (unit_combo(&fr.leaf_basis, &mut rng), unit_combo(&fr.leaf_basis, &mut rng));
                    let k = C64::new(rng.normal(), rng.normal());
                    let r = |x: &[C64], v: &[C64]| tensor_r_numeric(p, x, v).map(|t| t.value);
                    // Antilinear in the (1,0)-vector X, linear in V.
                    let lhs = r(&add_vec(&x, &scale_vec(&y, k)), &v)?;
                    let rhs = add_vec(&r(&x, &v)?, &scale_vec(&r(&y, &v)?, k.conj()));
                    let e1 = norm(&sub_vec(&lhs, &rhs));
                    let lhs = r(&x, &add_vec(&v, &scale_vec(&w, k)))?;
                    let rhs = add_vec(&r(&x, &v)?, &scale_vec(&r(&x, &w)?, k));
                    let e2 = norm(&sub_vec(&lhs, &rhs));
                    linear &= log.require(e1 < 1e-7 && e2 < 1e-7, || format!("{} linearity: {e1:e} {e2:e}", label(d)));
                }
                Ok(())
            })();
            if let Err(e) = out {
                log.fail(format!("{} point {i}: {e}", label(d)));
                agree = false;
            }
        }
        rows.push(json!({"model": label(d), "closed_numeric": agree, "linearity": linear, "leaf_kernel": leafwise}));
    }
    Value::Array(rows)
}

/// Slice-kernel dimension of `X ↦ −aα*B₀ − B₀βb*` by direct rank, with α, β
/// running over orthonormal bases of `a^⊥` and `b^⊥`.
fn brute_kernel_dim(a: &[C64], b: &[C64], b0: &ComplexMatrix) -> usize {
    let perp = |u: &[C64]| {
        let n = u.len();
        let mut all = vec![u.to_vec()];
        all.extend((0..n).map(|i| ComplexMatrix::identity(n).column(i)));
        orthonormalize(&all, 1e-8).split_off(1)
    };
    let mut cols = Vec::new();
    let neg = C64::new(-1.0, 0.0);
    for alpha in perp(a) {
        cols.push(ComplexMatrix::outer_h(a, &alpha).mul(b0).scale(neg).into_vec());
    }
    for beta in perp(b) {
        cols.push(b0.mul(&ComplexMatrix::outer_h(&beta, b)).scale(neg).into_vec());
    }
    let total = cols.len();
    let rank = rank_with_tol(&ComplexMatrix::from_columns(a.len() * b.len(), &cols), &TolerancePolicy::default())
        .map(|(r, _)| r)
        .unwrap_or(usize::MAX);
    total.saturating_sub(rank)
}

fn kernel_law(scale: &Scale, seed: u64, log: &mut Log) -> Value {
    let policy = TolerancePolicy::default();
    let mut rows = Vec::new();
    for m in 2..=scale.kernel_max {
        for n in 2..=scale.kernel_max {
            let d = DomainModel::new(ModelKind::I, m, n).expect("valid");
            let mut rng = SeededRng::new(sub_seed(seed, 300 + (m * 10 + n) as u64, 0));
            let out = (|| -> crtool_core::Result<Vec<Value>> {
                let pt = sample_boundary_point(&d, sub_seed(seed, m as u64, n as u64), 0.0)?;
                let tensor = r_tensor_numeric(&pt)?;
                let Provenance::RankOne { u, v, .. } = pt.provenance().clone() else {
                    return Err(crtool_core::Error::NotCanonicalPoint);
                };
                let mut per_rank = Vec::new();
                for r in 1..m.min(n) {
                    let mut matched = 0;
                    for _ in 0..scale.kernel_samples {
                        let mut b0 = ComplexMatrix::zeros(m, n);
                        for _ in 0..r {
                            let a = project_out(
                                &rng.complex_vec(m),
                                &ComplexMatrix::from_columns(m, std::slice::from_ref(&u)),
                            );
                            let b = project_out(
                                &rng.complex_vec(n),
                                &ComplexMatrix::from_columns(n, std::slice::from_ref(&v)),
                            );
                            b0 = b0.add(&ComplexMatrix::outer_h(&a, &b));
                        }
                        let vv = d.coords_of(&b0)?;
                        let vv = scale_vec(&vv, C64::new(1.0 / norm(&vv), 0.0));
                        let want = (m - 1 - r) + (n - 1 - r);
                        let (got, stable) = kernel_dim_in(&tensor, &vv, &policy)?;
                        let brute = brute_kernel_dim(&u, &v, &d.matrix_of(&vv)?);
                        let rank = singular_values(&d.matrix_of(&vv)?)?.iter().filter(|&&s| s > 1e-10).count();
                        if log.require(got == want && brute == want && stable && rank == r, || {
                            format!("I({m},{n}) rank {r}: kernel {got} brute {brute} want {want}")
                        }) {
                            matched += 1;
                        }
                    }
                    per_rank.push(json!({"rank": r, "expected": (m - 1 - r) + (n - 1 - r), "matched": matched, "total": scale.kernel_samples}));
                }
                Ok(per_rank)
            })();
            match out {
                Ok(per_rank) => rows.push(json!({"model": label(&d), "ranks": per_rank})),
                Err(e) => log.fail(format!("I({m},{n}): {e}")),
            }
        }
    }
    Value::Array(rows)
}

fn invariance(scale: &Scale, seed: u64, log: &mut Log) -> Value {
    let cases: Vec<DomainModel> = match scale.max_dim {
        6 => vec![
            (ModelKind::I, 3, 3),
            (ModelKind::I, 3, 4),
            (ModelKind::II, 5, 0),
            (ModelKind::II, 6, 0),
            (ModelKind::III, 3, 0),
            (ModelKind::III, 4, 0),
        ],
        _ => vec![(ModelKind::I, 3, 3), (ModelKind::II, 5, 0), (ModelKind::III, 3, 0)],
    }
    .into_iter()
    .map(|(k, m, n)| DomainModel::new(k, m, n).expect("valid"))
    .collect();
    let mut rows = Vec::new();
    for (mi, d) in cases.iter().enumerate() {
        let mut rng = SeededRng::new(sub_seed(seed, 400 + mi as u64, 0));
        let mut nus = Vec::new();
        for i in 0..scale.unitaries {
            let spec = match d.kind() {
                ModelKind::I => MapSpec::UnitaryI { u: rng.unitary(d.m()), v: rng.unitary(d.n()) },
                ModelKind::II => MapSpec::UnitaryII { u: rng.unitary(d.m()) },
                _ => MapSpec::UnitaryIII { u: rng.unitary(d.m()) },
            };
            let out = (|| -> crtool_core::Result<(usize, usize)> {
                let pt = sample_boundary_point(d, sub_seed(seed, mi as u64, i), 0.5)?;
                let img = apply_map(&spec, &pt)?;
                let (sa, sb) = (levi_report(&pt)?.signature, levi_report(&img)?.signature);
                log.require(sa == sb, || format!("{} map {i}: signature {sa:?} vs {sb:?}", label(d)));
                let cfg = NuConfig { seed: i, ..NuConfig::default() };
                Ok((nu_estimate(&pt, &cfg)?.nu, nu_estimate(&img, &cfg)?.nu))
            })();
            match out {
                Ok((a, b)) => {
                    log.require(a == b && a == d.expected_nu(), || format!("{} map {i}: nu {a} -> {b}", label(d)));
                    nus.push(json!([a, b]));
                }
                Err(e) => log.fail(format!("{} map {i}: {e}", label(d))),
            }
        }
        rows.push(json!({"model": label(d), "nu_pairs": nus}));
    }
    Value::Array(rows)
}

fn cayley(scale: &Scale, seed: u64, log: &mut Log) -> Value {
    let mut rows = Vec::new();
    for m in 3..=scale.max_dim {
        let spec = MapSpec::CayleyTubeToIV { m };
        let src = DomainModel::new(ModelKind::Tube, m, 0).expect("valid");
        let (mut max_rho, mut min_sigma, mut nu_ok) = (0.0f64, f64::INFINITY, true);
        for i in 0..scale.cayley_points {
            let out = (|| -> crtool_core::Result<()> {
                let r = 0.9 * (i % 10) as f64 / 10.0;
                let pt = sample_boundary_point(&src, sub_seed(seed, 500 + m as u64, i), r)?;
                let img = apply_map(&spec, &pt)?;
                let rho = img.defining_value().abs();
                let z = pt.coords();
                let cols: Vec<Vec<C64>> = (0..m)
                    .map(|j| spec.differential(&z, &ComplexMatrix::identity(m).column(j)))
                    .collect::<crtool_core::Result<_>>()?;
                let s = singular_values(&ComplexMatrix::from_columns(m, &cols))?;
                let smin = s[m - 1];
                max_rho = max_rho.max(rho);
                min_sigma = min_sigma.min(smin);
                log.require(rho < 1e-8 && smin > 1e-6, || {
                    format!("Tube({m}) point {i}: rho {rho:e} sigma_min {smin:e}")
                });
                let cfg = NuConfig { seed: i, ..NuConfig::default() };
                let (a, b) = (nu_estimate(&pt, &cfg)?.nu, nu_estimate(&img, &cfg)?.nu);
                nu_ok &= log.require(a == 0 && b == 0, || format!("Tube({m}) point {i}: nu {a} -> {b}"));
                Ok(())
            })();
            if let Err(e) = out {
                log.fail(format!("Tube({m}) point {i}: {e}"));
            }
        }
        rows.push(json!({
            "model": format!("Tube({m})"),
            "rho_below_1e-8": max_rho < 1e-8,
            "sigma_min_above_1e-6": min_sigma > 1e-6,
            "nu_preserved": nu_ok,
        }));
    }
    Value::Array(rows)
}

fn ranks(scale: &Scale, log: &mut Log) -> Value {
    let mut rows = Vec::new();
    for (mi, d) in models_in_range(scale.max_dim).iter().enumerate() {
        // IV(2) is Levi-flat: nu = n+ = 0, so it is not 2-nondegenerate.
        if d.expected_positive() == 0 {
            rows.push(json!({"model": label(d), "skipped": "Levi-flat"}));
            continue;
        }
        let out = (|| -> crtool_core::Result<[usize; 3]> {
            let pt = sample_boundary_point(d, mi as u64, 0.0)?;
            let mut r = [0; 3];
            for (k, slot) in r.iter_mut().enumerate() {
                let (val, stable) = nondegeneracy_rank(&pt, k)?;
                log.require(stable, || format!("{} r_{k} unstable", label(d)));
                *slot = val;
            }
            Ok(r)
        })();
        match out {
            Ok(r) => {
                let want = [1, 1 + d.expected_positive(), d.ambient_dim()];
                log.require(r == want, || format!("{}: {r:?} want {want:?}", label(d)));
                rows.push(json!({"model": label(d), "r": r, "expected": want}));
            }
            Err(e) => log.fail(format!("{}: {e}", label(d))),
        }
    }
    Value::Array(rows)
}

fn embeddings(scale: &Scale, seed: u64, log: &mut Log) -> Value {
    let policy = TolerancePolicy::default();
    let phis = [C64::new(0.0, 0.0), C64::new(0.5, 0.0), C64::new(-0.5, 0.0), C64::new(0.0, 0.9)];
    let mut rows = Vec::new();
    for phi in phis {
        let specs = [
            MapSpec::BlockEmbedI { m: 2, n: 2, phi: Phi::Constant(phi) },
            MapSpec::BlockEmbedI { m: 2, n: 3, phi: Phi::Constant(phi) },
            MapSpec::BlockEmbedI { m: 3, n: 3, phi: Phi::Constant(phi) },
            MapSpec::BlockEmbedII { m: 4, phi: Phi::Constant(phi) },
            MapSpec::BlockEmbedII { m: 5, phi: Phi::Constant(phi) },
            MapSpec::SphereEmbedIII { m: 3, phi: Phi::Constant(phi) },
            MapSpec::SphereEmbedIII { m: 4, phi: Phi::Constant(phi) },
        ];
        for (si, spec) in specs.iter().enumerate() {
            let mut ok = 0;
            let name = crate::io::map_to_json(spec)["kind"].as_str().unwrap_or("").to_string();
            let out = (|| -> crtool_core::Result<()> {
                let src = spec.source()?;
                let tgt = spec.target()?;
                for i in 0..scale.embed_points {
                    let r = 0.8 * (i % 4) as f64 / 3.0;
                    let pt = sample_boundary_point(&src, sub_seed(seed, 600 + si as u64, i), r)?;
                    let img = apply_map(spec, &pt)?;
                    let member = is_smooth_boundary_point(&tgt, img.ambient(), &policy);
                    let transversal = cr_transversality_check(spec, &pt)?;
                    if log.require(member && transversal, || {
                        format!("{name} {} phi {phi}: member {member} transversal {transversal}", label(&tgt))
                    }) {
                        ok += 1;
                    }
                }
                Ok(())
            })();
            if let Err(e) = out {
                log.fail(format!("{name} phi {phi}: {e}"));
            }
            let target = spec.target().map(|t| label(&t)).unwrap_or_default();
            rows.push(json!({"map": name, "target": target, "phi": [phi.re, phi.im], "passed": ok, "total": scale.embed_points}));
        }
    }
    Value::Array(rows)
}

/// One line of the golden table for the given inputs.
pub fn classify_line(kind: ModelKind, m: usize, n: usize, n_plus: usize, transversal: bool, minimal: bool) -> String {
    let verdict = match classify(kind, m, n, n_plus, transversal, minimal) {
        Ok(v) => v.value.name().to_string(),
        Err(e) => format!("{e:?}"),
    };
    format!("{}\t{m}\t{n}\t{n_plus}\t{}\t{}\t{verdict}", kind.name(), u8::from(transversal), u8::from(minimal))
}

/// Regenerates the golden table from its input columns.
pub fn regenerate_golden(golden: &str) -> Result<String, String> {
    let mut out = String::new();
    for line in golden.lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            out.push_str(line);
            out.push('\n');
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 7 {
            return Err(format!("malformed line: {line}"));
        }
        let kind = ModelKind::parse(f[0]).ok_or_else(|| format!("bad kind in: {line}"))?;
        let num = |s: &str| s.parse::<usize>().map_err(|_| format!("bad number in: {line}"));
        let flag = |s: &str| match s {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(format!("bad flag in: {line}")),
        };
        out.push_str(&classify_line(kind, num(f[1])?, num(f[2])?, num(f[3])?, flag(f[4])?, flag(f[5])?));
        out.push('\n');
    }
    Ok(out)
}

fn golden(log: &mut Log) -> Value {
    let cases = CLASSIFY_GOLDEN.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).count();
    match regenerate_golden(CLASSIFY_GOLDEN) {
        Ok(text) => {
            for (want, got) in CLASSIFY_GOLDEN.lines().zip(text.lines()) {
                log.require(want == got, || format!("expected `{want}`, got `{got}`"));
            }
            log.require(text.as_bytes() == CLASSIFY_GOLDEN.as_bytes(), || "table differs byte-wise".to_string());
        }
        Err(e) => log.fail(e),
    }
    json!({"cases": cases})
}
