//! One line per acceptance criterion; exits non-zero if any fails.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use spindetect::cli::{cmd_design, cmd_ensemble, cmd_levels, cmd_simulate, design_report};
use spindetect::config::{Duration, Preset, RunConfig};
use spindetect::detection::{run_ensemble, EnsembleSpec, EnsembleStats, Method};
use spindetect::device::{field_magnitude, rect_wire_field, NanowireGeometry};
use spindetect::dynamics::effective::GROUND;
use spindetect::dynamics::{steady_sigma_minus, FullModel, ModelParams, Noise, SmeStepper};
use spindetect::numerics::{hermitian_eig, Mat2, RngStream};
use spindetect::spin::{
    coupling_constant, labeled_transition, resonance_field_search, solve_levels, BismuthDonor, NvCenter,
    PairSelector, SpinSystem, BI_PAIR, NV_PAIR,
};

const GAMMA_E: f64 = 2.0 * PI * 28e9;
const MU0: f64 = 1.256_637_062_12e-6;
const TRIALS: usize = 3000;
const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn within(x: f64, target: f64, rel: f64) -> bool {
    (x / target - 1.0).abs() <= rel
}

fn coupling_hz(system: &dyn SpinSystem, pair: PairSelector, omega: f64, bracket: (f64, f64), db: f64) -> f64 {
    let z = [0.0, 0.0, 1.0];
    let b0 = resonance_field_search(system, pair, z, omega, bracket).unwrap();
    let levels = solve_levels(system, [0.0, 0.0, b0]).unwrap();
    let t = labeled_transition(system, &levels, pair.lower, pair.upper).unwrap();
    coupling_constant(&t, [db, 0.0, 0.0]) / (2.0 * PI)
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let nv = coupling_hz(&NvCenter::default(), NV_PAIR, 2.0 * PI * 2.9e9, (0.0, 5e-3), 0.33e-6);
    let bi = coupling_hz(&BismuthDonor::default(), BI_PAIR, 2.0 * PI * 7.3e9, (2e-3, 6e-3), 0.61e-6);
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: within(nv, 6.5e3, 0.02) && within(bi, 8.0e3, 0.02) && secs < 1.0,
        detail: format!("g/2pi NV {nv:.1} Hz (6.5 kHz), Bi {bi:.1} Hz (8.0 kHz), {secs:.3} s"),
    }
}

/// Midpoint-rule Biot–Savart over the wire cross-section.
fn quadrature_field(g: &NanowireGeometry, i: f64, x: f64, y: f64, n: usize) -> f64 {
    let (hx, hy) = (g.width_m / n as f64, g.thickness_m / n as f64);
    let (mut bx, mut by) = (0.0, 0.0);
    for a in 0..n {
        let xs = -0.5 * g.width_m + (a as f64 + 0.5) * hx;
        for b in 0..n {
            let ys = -0.5 * g.thickness_m + (b as f64 + 0.5) * hy;
            let (dx, dy) = (x - xs, y - ys);
            let r2 = dx * dx + dy * dy;
            bx -= dy / r2;
            by += dx / r2;
        }
    }
    let k = MU0 * i / (g.width_m * g.thickness_m) * hx * hy / (2.0 * PI);
    k * (bx * bx + by * by).sqrt()
}

fn criterion2() -> Outcome {
    let nv = design_report(&RunConfig::preset(Preset::Nv)).unwrap();
    let bi = design_report(&RunConfig::preset(Preset::Bi)).unwrap();
    let cfg = RunConfig::preset(Preset::Nv);
    let [x, y] = cfg.spin_position_m;
    let probe = field_magnitude(rect_wire_field(&cfg.geometry, 35e-9, x, y).unwrap());
    let quad = quadrature_field(&cfg.geometry, 35e-9, x, y, 512);
    let checks = [
        within(nv.delta_i_a, 35e-9, 0.03),
        within(bi.delta_i_a, 65e-9, 0.03),
        within(nv.kinetic_inductance_h, 50e-12, 0.05),
        within(probe, 0.33e-6, 0.05),
        within(probe, quad, 1e-4),
    ];
    Outcome {
        pass: checks.iter().all(|&c| c),
        detail: format!(
            "di NV {:.2} nA (35), Bi {:.2} nA (65), L_k {:.2} pH (50), |dB| at 35 nA {:.4} uT (0.33), quadrature rel {:.1e}",
            nv.delta_i_a * 1e9,
            bi.delta_i_a * 1e9,
            nv.kinetic_inductance_h * 1e12,
            probe * 1e6,
            (probe / quad - 1.0).abs()
        ),
    }
}

fn criterion3() -> Outcome {
    let start = Instant::now();
    let (nv, bi, sim) = (ModelParams::nv(), ModelParams::bi(), ModelParams::sim());
    let (tp_nv, tp_bi) = (1.0 / nv.gamma_p(), 1.0 / bi.gamma_p());
    let sim20 = 20.0 * sim.tau1();
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: within(tp_nv, 27e-6, 0.05)
            && within(tp_bi, 45e-6, 0.05)
            && within(nv.tau1(), 0.35e-3, 0.05)
            && within(bi.tau1(), 0.17e-3, 0.05)
            && (4.8e-3..=5.3e-3).contains(&sim20)
            && secs < 1.0,
        detail: format!(
            "1/gamma_p NV {:.2} us (27), Bi {:.2} us (45); tau1 NV {:.4} ms (0.35), Bi {:.4} ms (0.17); sim 20 tau1 {:.3} ms",
            tp_nv * 1e6,
            tp_bi * 1e6,
            nv.tau1() * 1e3,
            bi.tau1() * 1e3,
            sim20 * 1e3
        ),
    }
}

/// Breit–Rabi levels of A S·I − γ_e B S_z, S = 1/2.
fn breit_rabi(a: f64, i: f64, b: f64) -> Vec<f64> {
    let w = -GAMMA_E * b;
    let x = 2.0 * w / (a * (2.0 * i + 1.0));
    let half = a * (2.0 * i + 1.0) / 4.0;
    let two_i = (2.0 * i).round() as i32;
    let mut out = Vec::new();
    for two_m in (-two_i + 1..=two_i - 1).step_by(2) {
        let m = two_m as f64 / 2.0;
        let root = (1.0 + 4.0 * m * x / (2.0 * i + 1.0) + x * x).sqrt();
        out.push(-a / 4.0 + half * root);
        out.push(-a / 4.0 - half * root);
    }
    out.push(a * i / 2.0 + w / 2.0);
    out.push(a * i / 2.0 - w / 2.0);
    out.sort_by(f64::total_cmp);
    out
}

fn criterion4() -> Outcome {
    let bi = BismuthDonor::default();
    let a = bi.params.a_rad_per_s;
    let mut worst_bi = 0.0f64;
    for k in 0..=100 {
        let b = 1e-4 * k as f64;
        let got = hermitian_eig(&bi.hamiltonian([0.0, 0.0, b])).unwrap().values;
        for (g, w) in got.iter().zip(breit_rabi(a, 4.5, b)) {
            worst_bi = worst_bi.max((g - w).abs() / w.abs().max(a));
        }
    }
    let nv = NvCenter::default();
    let (d, az) = (nv.params.d_rad_per_s, nv.params.a_z_rad_per_s);
    let mut worst_nv = 0.0f64;
    for k in 0..=50 {
        let b = 2e-4 * k as f64;
        let got = hermitian_eig(&nv.hamiltonian([0.0, 0.0, b])).unwrap().values;
        let mut want: Vec<f64> = [1.0f64, 0.0, -1.0]
            .iter()
            .flat_map(|&ms| [0.5, -0.5].map(move |mi| ms * ms * d - GAMMA_E * b * ms + az * ms * mi))
            .collect();
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            worst_nv = worst_nv.max((g - w).abs() / w.abs().max(d));
        }
    }
    Outcome {
        pass: worst_bi <= 1e-9 && worst_nv <= 1e-10,
        detail: format!("Bi vs Breit-Rabi max rel {worst_bi:.1e}, NV vs diagonal max rel {worst_nv:.1e}"),
    }
}

fn full_vs_effective(mut p: ModelParams) -> f64 {
    p.n_fock = 10;
    let m = FullModel::new(&p).unwrap();
    let ss = m.steady_state().unwrap();
    let full = m.sigma_minus(&ss);
    let eff = steady_sigma_minus(&p);
    (full - eff).norm() / eff.norm()
}

fn purcell_fit() -> f64 {
    let mut p = ModelParams::sim();
    p.kappa_per_s = 20.0 * p.g_rad_per_s;
    p.kappa1_per_s = p.kappa_per_s;
    p.gamma_phi_per_s = 0.0;
    p.beta_re_sqrt_per_s = 0.0;
    p.beta_im_sqrt_per_s = 0.0;
    p.n_fock = 4;
    let m = FullModel::new(&p).unwrap();
    let excited = Mat2::new(0.0.into(), 0.0.into(), 0.0.into(), 1.0.into());
    let mut s = m.product_state(&excited, 0.0.into());
    let dt = 0.01 / p.max_rate_full();
    let gp = p.gamma_p();
    let n = m.dim() / 2;
    let stride = ((0.05 / gp) / dt).round() as usize;
    let (mut ts, mut ls) = (vec![], vec![]);
    let mut k = 0usize;
    while s.time_s < 3.0 / gp {
        s = m.step(&s, dt).unwrap();
        k += 1;
        if k % stride == 0 && s.time_s > 10.0 / p.kappa_per_s {
            let pe: f64 = (0..n).map(|j| s.rho[(n + j, n + j)].re).sum();
            ts.push(s.time_s);
            ls.push(pe.ln());
        }
    }
    let len = ts.len() as f64;
    let (mt, ml) = (ts.iter().sum::<f64>() / len, ls.iter().sum::<f64>() / len);
    let num: f64 = ts.iter().zip(&ls).map(|(t, l)| (t - mt) * (l - ml)).sum();
    let den: f64 = ts.iter().map(|t| (t - mt) * (t - mt)).sum();
    -num / den / gp
}

fn criterion5() -> Outcome {
    let mut worst_trace = 0.0f64;
    let mut worst_herm = 0.0f64;
    let mut min_eig = f64::INFINITY;
    for p in [ModelParams::sim(), ModelParams::nv(), ModelParams::bi()] {
        let s = SmeStepper::new(&p, p.default_dt()).unwrap();
        let mut rng = RngStream::new(5);
        let mut rho = GROUND;
        for k in 0..20_000 {
            rho = s.step(&rho, Noise::Generate(&mut rng), k).unwrap().0;
            worst_trace = worst_trace.max((rho.trace() - 1.0).norm());
            worst_herm = worst_herm.max(rho.hermitian_residual());
            min_eig = min_eig.min(rho.min_eigenvalue());
        }
    }
    let sim = ModelParams::sim();
    let d_sim = full_vs_effective(sim);
    let mut strong = sim;
    strong.kappa_per_s = 20.0 * sim.g_rad_per_s;
    strong.kappa1_per_s = strong.kappa_per_s;
    strong.set_saturating_drive();
    let d_20 = full_vs_effective(strong);
    let fit = purcell_fit();
    Outcome {
        pass: worst_trace <= 1e-10
            && worst_herm <= 1e-10
            && min_eig >= -1e-8
            && d_sim <= 0.05
            && d_20 <= 0.01
            && (fit - 1.0).abs() <= 0.02,
        detail: format!(
            "trace err {worst_trace:.1e}, herm {worst_herm:.1e}, min eig {min_eig:.1e}; full vs eff {:.2}% (k=7.3g), {:.3}% (k=20g); Purcell fit/gamma_p {fit:.4}",
            d_sim * 100.0,
            d_20 * 100.0
        ),
    }
}

fn sample_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (mean, xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0))
}

fn ensemble(eta: f64, duration_tau1: f64) -> EnsembleStats {
    let mut p = ModelParams::sim();
    p.eta = eta;
    let tau1 = p.tau1();
    let mut spec = EnsembleSpec::new(p, TRIALS, duration_tau1 * tau1, SEED);
    spec.snapshot_times_s = vec![20.0 * tau1];
    run_ensemble(&spec).unwrap()
}

fn criterion6(s: &EnsembleStats) -> Outcome {
    let snap = s.snapshot_near(20.0 * s.tau1_s).unwrap();
    let (m_s, v_s) = sample_var(&snap.zeta_spin);
    let (m_n, v_n) = sample_var(&snap.zeta_no_spin);
    let sep = (m_s - m_n).abs();
    let eta = s.params.eta;
    Outcome {
        pass: within(v_s, eta, 0.10) && within(v_n, eta, 0.10) && (sep - 5f64.sqrt()).abs() <= 0.1,
        detail: format!(
            "t = {:.2} tau1, N = {}: var spin {v_s:.4}, var no-spin {v_n:.4} (0.5 +/- 10%), separation {sep:.4} (2.236 +/- 0.1)",
            snap.t_s / s.tau1_s,
            s.trials_used
        ),
    }
}

fn criterion7(runs: &[&EnsembleStats]) -> Outcome {
    let mut outside = Vec::new();
    let mut bayes_worse = Vec::new();
    let mut checked = 0;
    for s in runs {
        for k in 1..=20 {
            let t = k as f64 * s.tau1_s;
            let c = s.curve.iter().min_by(|a, b| (a.t_s - t).abs().total_cmp(&(b.t_s - t).abs())).unwrap();
            checked += 1;
            let (lo, hi) = c.threshold_ci95;
            if !(lo..=hi).contains(&c.error_threshold_analytic) {
                outside.push(format!("eta {} t {k}", s.params.eta));
            }
            if c.error_bayes_empirical > c.error_threshold_empirical {
                bayes_worse.push(format!(
                    "eta {} t {k}: {:.4} vs {:.4}",
                    s.params.eta, c.error_bayes_empirical, c.error_threshold_empirical
                ));
            }
        }
    }
    Outcome {
        pass: outside.is_empty() && bayes_worse.is_empty(),
        detail: format!(
            "{} of {checked} points have the analytic threshold error outside the 95% band{}; {} with Bayes above threshold {:?}",
            outside.len(),
            if outside.is_empty() { String::new() } else { format!(" (first: {})", outside[0]) },
            bayes_worse.len(),
            bayes_worse
        ),
    }
}

fn criterion8(s: &EnsembleStats) -> Outcome {
    let tau = |m| s.time_to_error(m, 1e-2).map(|t| t / s.tau1_s);
    let (b, e, a) = (tau(Method::BayesEmpirical), tau(Method::ThresholdEmpirical), tau(Method::ThresholdAnalytic));
    match (b, e) {
        (Some(b), Some(e)) => {
            let reduction = 1.0 - b / e;
            Outcome {
                pass: (0.20..=0.40).contains(&reduction),
                detail: format!(
                    "time to 1e-2 (tau1): Bayes {b:.2}, threshold empirical {e:.2}, analytic {}; reduction {:.1}% (20-40%)",
                    a.map_or("n/a".into(), |a| format!("{a:.2}")),
                    reduction * 100.0
                ),
            }
        }
        _ => Outcome { pass: false, detail: format!("1e-2 not reached within {:.0} tau1", s.steps as f64 * s.dt_s / s.tau1_s) },
    }
}

fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    out.sort();
    out
}

fn produce(root: &Path) -> Vec<(String, Vec<u8>)> {
    std::env::set_current_dir(root).unwrap();
    let mut nv = RunConfig::preset(Preset::Nv);
    nv.out_dir = "design".into();
    cmd_design(&nv).unwrap();
    nv.out_dir = "levels".into();
    cmd_levels(&nv).unwrap();
    let mut sim = RunConfig::preset(Preset::Sim);
    sim.seed = 7;
    sim.duration = Duration::Tau1(4.0);
    sim.out_dir = "simulate".into();
    cmd_simulate(&sim).unwrap();
    sim.trials = 200;
    sim.eta_list = vec![0.25, 0.5];
    sim.out_dir = "ensemble".into();
    cmd_ensemble(&sim).unwrap();
    ["design", "levels", "simulate", "ensemble"]
        .iter()
        .flat_map(|d| tree(&root.join(d)).into_iter().map(move |(n, b)| (format!("{d}/{n}"), b)))
        .collect()
}

fn criterion9() -> Outcome {
    let cwd = std::env::current_dir().unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (ta, tb) = (produce(a.path()), produce(b.path()));
    std::env::set_current_dir(cwd).unwrap();
    let differing: Vec<&str> =
        ta.iter().zip(&tb).filter(|(x, y)| x != y).map(|(x, _)| x.0.as_str()).collect();
    Outcome {
        pass: ta.len() == tb.len() && differing.is_empty(),
        detail: format!("{} files compared, {} differ {:?}", ta.len(), differing.len(), differing),
    }
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |n: usize, o: Outcome| {
        println!("criterion {n}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    };
    report(1, criterion1());
    report(2, criterion2());
    report(3, criterion3());
    report(4, criterion4());
    report(5, criterion5());
    let half = ensemble(0.5, 60.0);
    let quarter = ensemble(0.25, 20.0);
    let unit = ensemble(1.0, 20.0);
    report(6, criterion6(&half));
    report(7, criterion7(&[&quarter, &half, &unit]));
    report(8, criterion8(&half));
    report(9, criterion9());
    if failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria fail");
        ExitCode::FAILURE
    }
}
