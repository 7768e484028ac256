use std::f64::consts::PI;

use spindetect::device::{
    field_magnitude, kinetic_inductance, noise_photons, efficiency_from_noise_photons, purcell_rate,
    measurement_time_tau1, rect_wire_field, zero_point_current, NanowireGeometry, ResonatorParams,
};

const MU0: f64 = 1.256_637_062_12e-6;
const HBAR: f64 = 1.054_571_817e-34;

fn wire(thickness: f64) -> NanowireGeometry {
    NanowireGeometry {
        width_m: 20e-9,
        thickness_m: thickness,
        length_m: 250e-9,
        sheet_resistance_ohm: 4.5,
        gap_j: 230e-6 * 1.602_176_634e-19,
        temperature_k: 0.01,
    }
}

/// Midpoint-rule Biot–Savart over the cross-section.
fn quadrature_field(g: &NanowireGeometry, i: f64, x: f64, y: f64, n: usize) -> [f64; 2] {
    let (hx, hy) = (g.width_m / n as f64, g.thickness_m / n as f64);
    let j = i / (g.width_m * g.thickness_m);
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
    let k = MU0 * j * hx * hy / (2.0 * PI);
    [k * bx, k * by]
}

#[test]
fn field_matches_quadrature() {
    let g = wire(10e-9);
    let i = 35e-9;
    for (x, y) in [(0.0, -20e-9), (7e-9, -12e-9), (25e-9, 0.0), (-15e-9, 9e-9), (30e-9, 30e-9)] {
        let b = rect_wire_field(&g, i, x, y).unwrap();
        let q = quadrature_field(&g, i, x, y, 512);
        let scale = field_magnitude(b);
        assert!((b[0] - q[0]).abs() <= 1e-4 * scale, "({x},{y}) Bx {} vs {}", b[0], q[0]);
        assert!((b[1] - q[1]).abs() <= 1e-4 * scale, "({x},{y}) By {} vs {}", b[1], q[1]);
    }
}

#[test]
fn ampere_circulation() {
    let g = wire(10e-9);
    let i = 35e-9;
    for r in [15e-9, 40e-9] {
        let n = 4000;
        let mut circ = 0.0;
        for k in 0..n {
            let th = 2.0 * PI * k as f64 / n as f64;
            let b = rect_wire_field(&g, i, r * th.cos(), r * th.sin()).unwrap();
            circ += (-b[0] * th.sin() + b[1] * th.cos()) * r * 2.0 * PI / n as f64;
        }
        assert!((circ / (MU0 * i) - 1.0).abs() < 1e-3, "{circ}");
    }
}

#[test]
fn probe_point_field() {
    let g = wire(10e-9);
    let b = rect_wire_field(&g, 35e-9, 0.0, -(5e-9 + 15e-9)).unwrap();
    let m = field_magnitude(b);
    assert!((m / 0.33e-6 - 1.0).abs() < 0.05, "{m}");
    let q = quadrature_field(&g, 35e-9, 0.0, -20e-9, 512);
    assert!(((q[0] * q[0] + q[1] * q[1]).sqrt() / m - 1.0).abs() < 1e-4);
}

#[test]
fn zero_point_currents() {
    let nv = ResonatorParams { omega_r_rad_per_s: 2.0 * PI * 2.9e9, z_r_ohm: 15.3, kappa_per_s: 0.9e5, kappa1_per_s: 0.9e5 };
    let di = zero_point_current(&nv);
    assert!((di - 2.0 * PI * 2.9e9 * (HBAR / 30.6).sqrt()).abs() < 1e-6 * di);
    let quarter = ResonatorParams { z_r_ohm: 4.0 * 15.3, ..nv };
    assert!((zero_point_current(&quarter) / di - 0.5).abs() < 1e-12);
    let bi = ResonatorParams { omega_r_rad_per_s: 2.0 * PI * 7.3e9, z_r_ohm: 26.5, ..nv };
    assert!((zero_point_current(&bi) / 65e-9 - 1.0).abs() < 0.03);
    assert!((nv.quality_factor() - nv.omega_r_rad_per_s / (2.0 * nv.kappa_per_s)).abs() < 1e-6 * nv.quality_factor());
}

#[test]
fn kinetic_inductance_value() {
    let lk = kinetic_inductance(&wire(10e-9));
    assert!((lk / 50e-12 - 1.0).abs() < 0.05, "{lk}");
}

#[test]
fn purcell_and_tau1_values() {
    let g_nv = 2.0 * PI * 6.5e3;
    assert!((1.0 / purcell_rate(g_nv, 0.9e5, 0.0) / 27e-6 - 1.0).abs() < 0.05);
    let g_bi = 2.0 * PI * 8e3;
    assert!((1.0 / purcell_rate(g_bi, 2.3e5, 0.0) / 45e-6 - 1.0).abs() < 0.05);
    let m = measurement_time_tau1(g_nv, 0.9e5, 1e5, 0.0, 0.5);
    assert!((m.tau1 / 0.35e-3 - 1.0).abs() < 0.05);
    assert!((m.tau_eta - 2.0 * m.tau1).abs() < 1e-15);
    let m = measurement_time_tau1(g_bi, 2.3e5, 1e4, 0.0, 0.5);
    assert!((m.tau1 / 0.17e-3 - 1.0).abs() < 0.05);
}

#[test]
fn hemt_efficiency() {
    let n = noise_photons(15.0, 2.0 * PI * 7.3e9);
    let eta = efficiency_from_noise_photons(n).unwrap();
    assert!((eta - 0.02).abs() < 0.005, "{eta}");
}
