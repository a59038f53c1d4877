use std::f64::consts::PI;

use pkns_core::config::{GridSpec, Mode, RunConfig, StepControl};
use pkns_core::diagnostics::{
    free_energy_plane_radial, least_squares_slope, second_moment_radial, second_moment_raw,
};
use pkns_core::radial::{
    chemical_gradient_radial, cumulative_mass, rhs_radial, run_radial, step_radial,
    RadialDiffusion, RadialGrid, RadialRunner, RadialState, VerdictStatus,
};
use pkns_core::run::integrate;
use pkns_core::spectral::{
    curl, gradient, laplacian, Axis, SpectralScalar, SpectralVector, TorusGrid,
};

fn disk(r_max: f64, n_r: usize) -> (RadialGrid<f64>, Vec<f64>) {
    let g = RadialGrid::new(r_max, n_r).unwrap();
    // cell averages of the indicator of r < 1
    let n = (0..n_r)
        .map(|j| {
            let (a, b) = (g.face(j), g.face(j + 1));
            let inside = (b.min(1.0).powi(2) - a.min(1.0).powi(2)).max(0.0);
            inside / (b * b - a * a)
        })
        .collect();
    (g, n)
}

fn gaussian_state(mass: f64, width: f64, r_max: f64, n_r: usize) -> RadialState<f64> {
    let g = RadialGrid::new(r_max, n_r).unwrap();
    let raw = g.sample(|r: f64| (-r * r / (2.0 * width * width)).exp());
    let m: f64 = raw
        .iter()
        .enumerate()
        .map(|(j, v)| v * g.cell_area(j))
        .sum();
    let n = raw.iter().map(|v| v * mass / m).collect();
    RadialState::new(g, 0.0, n, vec![0.0; n_r]).unwrap()
}

#[test]
fn cumulative_mass_of_uniform_disk() {
    let err = |n_r: usize| {
        let (g, n) = disk(2.0, n_r);
        let m = cumulative_mass(&n, &g);
        let total: f64 = n
            .iter()
            .enumerate()
            .map(|(j, v)| 2.0 * PI * v * g.center(j) * g.spacing())
            .sum();
        assert_eq!(m.total(), total);
        assert!(m.faces.windows(2).all(|w| w[1] >= w[0]));
        (0..n_r)
            .map(|j| (m.centers[j] - PI * g.center(j).min(1.0).powi(2)).abs())
            .fold(0.0, f64::max)
    };
    let (e1, e2) = (err(100), err(200));
    assert!(e1 < 1e-3, "{e1}");
    assert!(e2 <= e1);
}

#[test]
fn chemical_gradient_of_disk_and_point_mass() {
    let (g, n) = disk(2.0, 400);
    let d = chemical_gradient_radial(&cumulative_mass(&n, &g), &g);
    for (j, &v) in d.iter().enumerate() {
        let r = g.center(j);
        if (r - 1.0).abs() < 2.0 * g.spacing() {
            continue;
        }
        let exact = if r < 1.0 { -r / 2.0 } else { -1.0 / (2.0 * r) };
        assert!((v - exact).abs() < 1e-4, "r={r}: {v} vs {exact}");
    }
    let g = RadialGrid::new(10.0, 1000).unwrap();
    let mut n = vec![0.0; 1000];
    n[0] = 3.0 / g.cell_area(0);
    let d = chemical_gradient_radial(&cumulative_mass(&n, &g), &g);
    for (j, &v) in d.iter().enumerate().skip(10) {
        let exact = -3.0 / (2.0 * PI * g.center(j));
        assert!(((v - exact) / exact).abs() < 1e-12);
    }
    assert!(chemical_gradient_radial(
        &cumulative_mass(&[0.0; 64], &RadialGrid::new(1.0, 64).unwrap()),
        &RadialGrid::new(1.0, 64).unwrap()
    )
    .iter()
    .all(|&v| v == 0.0));
}

#[test]
fn empty_density_leaves_only_vorticity_diffusion() {
    let g = RadialGrid::new(8.0, 128).unwrap();
    let omega = g.sample(|r: f64| (-r * r).exp());
    let s = RadialState::new(g, 0.0, vec![0.0; 128], omega.clone()).unwrap();
    let (dn, dw) = rhs_radial(&s, 1.0);
    assert!(dn.iter().all(|&v| v == 0.0));
    assert_eq!(dw, RadialDiffusion::new(&g).apply(&omega));
    let next = step_radial(&s, 1e-2, 1.0).unwrap();
    assert!(next.n.iter().all(|&v| v == 0.0));
    assert!(next.omega != omega);
}

/// Samples `f(|x|)` on a periodic box `[−L/2, L/2)²` mapped to the unit torus.
fn embed(grid: &TorusGrid<f64>, box_len: f64, f: impl Fn(f64) -> f64) -> SpectralScalar<f64> {
    SpectralScalar::from_fn(grid, |x, y| {
        let (a, b) = (box_len * (x - 0.5), box_len * (y - 0.5));
        f((a * a + b * b).sqrt())
    })
}

#[test]
fn radial_heat_operator_matches_cartesian_laplacian() {
    let box_len = 16.0;
    let tg = TorusGrid::<f64>::new(64).unwrap();
    let profile = |r: f64| (-r * r / 2.0).exp() * (1.0 + 0.3 * r * r);
    let lap2d = laplacian(&embed(&tg, box_len, profile))
        .scaled(1.0 / (box_len * box_len))
        .to_physical();
    let err = |n_r: usize| {
        let g = RadialGrid::new(8.0, n_r).unwrap();
        let s = RadialState::new(g, 0.0, g.sample(profile), vec![0.0; n_r]).unwrap();
        // chemotaxis off: the tendency is the radial heat operator
        let (dn, _) = rhs_radial(&s, 0.0);
        let mut worst = 0.0f64;
        for i in 0..64 {
            for k in 0..64 {
                let (a, b) = (
                    box_len * (tg.coordinate(i) - 0.5),
                    box_len * (tg.coordinate(k) - 0.5),
                );
                let r = (a * a + b * b).sqrt();
                if r > 6.0 {
                    continue;
                }
                // linear interpolation between cell centres
                let pos = (r / g.spacing() - 0.5).max(0.0);
                let j = (pos.floor() as usize).min(n_r - 2);
                let w = pos - j as f64;
                let radial = (1.0 - w) * dn[j] + w * dn[j + 1];
                worst = worst.max((radial - lap2d[i * 64 + k]).abs());
            }
        }
        worst
    };
    let (e1, e2) = (err(256), err(512));
    assert!(e1 < 1e-3, "{e1}");
    assert!(e1 / e2 > 3.0, "{e1:e} {e2:e}");
}

#[test]
fn radial_reduction_terms_vanish_in_two_dimensions() {
    let box_len = 16.0;
    let tg = TorusGrid::<f64>::new(128).unwrap();
    let n = embed(&tg, box_len, |r| 2.0 * (-r * r / 2.0).exp());
    let c = embed(&tg, box_len, |r| {
        -(1.0 + r * r / 2.0) * (-r * r / 2.0).exp()
    });
    let psi = embed(&tg, box_len, |r| (1.0 + r * r) * (-r * r / 2.0).exp());
    let d = |f: &SpectralScalar<f64>| gradient(f).scaled(1.0 / box_len);
    let (n1, n2) = d(&n).to_physical();
    let (c1, c2) = d(&c).to_physical();
    let (p1, p2) = d(&psi).to_physical();
    let nv = n.to_physical();
    // u = ∇⊥ψ = (−∂₂ψ, ∂₁ψ)
    let advection: Vec<f64> = (0..nv.len())
        .map(|i| -p2[i] * n1[i] + p1[i] * n2[i])
        .collect();
    let scale_adv = (0..nv.len())
        .map(|i| (p1[i].hypot(p2[i])) * n1[i].hypot(n2[i]))
        .fold(0.0, f64::max);
    let worst_adv = advection.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    assert!(
        worst_adv <= 1e-10 * scale_adv,
        "{worst_adv:e} vs {scale_adv:e}"
    );
    // ∇⊥·(n∇c) evaluated pseudo-spectrally
    let f1: Vec<f64> = (0..nv.len()).map(|i| nv[i] * c1[i]).collect();
    let f2: Vec<f64> = (0..nv.len()).map(|i| nv[i] * c2[i]).collect();
    let flux = SpectralVector::new(
        SpectralScalar::from_physical(&tg, &f1),
        SpectralScalar::from_physical(&tg, &f2),
    );
    let forcing_curl = curl(&flux).scaled(1.0 / box_len).to_physical();
    let scale_curl = pkns_core::spectral::spectral_derivative(&flux.first, Axis::X1)
        .scaled(1.0 / box_len)
        .to_physical()
        .iter()
        .fold(0.0f64, |a, v| a.max(v.abs()));
    let worst_curl = forcing_curl.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    assert!(
        worst_curl <= 1e-10 * scale_curl,
        "{worst_curl:e} vs {scale_curl:e}"
    );
}

#[test]
fn second_moment_of_disk() {
    let err = |n_r: usize| {
        let (g, n) = disk(2.0, n_r);
        let m: f64 = n.iter().enumerate().map(|(j, v)| v * g.cell_area(j)).sum();
        (second_moment_raw(&n, &g) - m / 2.0).abs()
    };
    assert!(err(200) < 1e-4);
    assert!(err(100) / err(200) > 3.0);
    let g = RadialGrid::new(1.0, 64).unwrap();
    assert_eq!(second_moment_raw(&[0.0; 64], &g), 0.0);
}

#[test]
fn pure_diffusion_second_moment_grows_at_four_m() {
    let s = gaussian_state(2.0, 1.0, 20.0, 1024);
    let ctl = StepControl::new(0.5, 1e-2, 1e-10).unwrap();
    let run = integrate(RadialRunner::new(s, 0.0, 0.01), &ctl, 2.0, 5, None).unwrap();
    let ts: Vec<f64> = run.records.iter().map(|r| r.t).collect();
    let vs: Vec<f64> = run.records.iter().map(|r| r.second_moment).collect();
    let slope = least_squares_slope(&ts, &vs).unwrap();
    assert!(((slope - 8.0) / 8.0).abs() < 1e-4, "{slope}");
    assert!(second_moment_radial(&run.final_state.state).is_ok());
}

#[test]
fn strang_step_is_second_order() {
    let mut s = gaussian_state(4.0 * PI, 1.0, 10.0, 512);
    s.omega = s.grid.sample(|r: f64| (1.0 - r * r) * (-r * r).exp());
    let defect = |dt: f64| {
        let full = step_radial(&s, dt, 1.0).unwrap();
        let half = step_radial(&step_radial(&s, dt / 2.0, 1.0).unwrap(), dt / 2.0, 1.0).unwrap();
        full.n
            .iter()
            .zip(&half.n)
            .chain(full.omega.iter().zip(&half.omega))
            .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()))
    };
    let (e1, e2) = (defect(4e-3), defect(2e-3));
    let order = (e1 / e2).log2() - 1.0;
    assert!(order >= 1.8, "observed order {order} ({e1:e}, {e2:e})");
}

#[test]
fn subcritical_run_conserves_mass_and_dissipates_energy() {
    let mut cfg = RunConfig::new(
        Mode::Radial,
        GridSpec::Radial {
            r_max: 16.0,
            n_r: 1024,
        },
        2.0,
        1e-2,
    );
    cfg.ic.mass = 6.0 * PI;
    cfg.ic.width = 1.0;
    cfg.ic.flow = pkns_core::config::FlowKind::Vortex;
    cfg.ic.flow_amplitude = 1.0;
    cfg.diag_every = 10;
    let run = run_radial(&cfg).unwrap();
    assert_eq!(run.verdict.status, VerdictStatus::Global);
    let recs = &run.trajectory.records;
    let m0 = recs[0].mass;
    for w in recs.windows(2) {
        assert!(
            (w[1].mass - m0).abs() <= 1e-13 * m0,
            "drift {:e}",
            (w[1].mass - m0) / m0
        );
        assert!(w[1].energy - w[0].energy <= 1e-5 * (1.0 + w[0].energy.abs()));
        assert!(w[1].l2_omega <= w[0].l2_omega);
    }
    assert!(free_energy_plane_radial(&run.trajectory.final_state.state).is_ok());
}

#[test]
fn four_pi_gaussian_is_global_with_bounded_density() {
    let mut cfg = RunConfig::new(
        Mode::Radial,
        GridSpec::Radial {
            r_max: 40.0,
            n_r: 512,
        },
        50.0,
        5e-2,
    );
    cfg.ic.mass = 4.0 * PI;
    cfg.ic.width = 1.0;
    cfg.diag_every = 20;
    let run = run_radial(&cfg).unwrap();
    assert_eq!(run.verdict.status, VerdictStatus::Global);
    assert_eq!(run.verdict.t_star, None);
    let mut running_max = 0.0f64;
    for r in &run.trajectory.records {
        if r.t > 1.0 {
            assert!(r.linf_n < 10.0 * running_max.max(r.linf_n));
        }
        running_max = running_max.max(r.linf_n);
    }
}
