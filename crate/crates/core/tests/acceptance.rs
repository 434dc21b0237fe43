//! Acceptance criteria C1–C10, one PASS/FAIL line each.
//!
//! Exits 0 after printing every line so the rest of the suite still runs;
//! set `ACCEPTANCE_STRICT=1` to exit 1 when any criterion fails.

mod common;

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sigmasurf::geometry::{
    curvature_from_constant, energy_density, gaussian_curvature_exact, metric_constant_residual,
    sample_curvature, veronese_metric_constant, STANDARD_RADIUS, STANDARD_RES,
};
use sigmasurf::harmonic::{symmetry_relation_residual, veronese_norm_sq};
use sigmasurf::projector::{
    conservation_residual, euler_lagrange_residual, member_projector, reduced_structure_report,
    sum_projector, sum_with,
};
use sigmasurf::surface::{
    embed, path_independence, rank1_reconstruct, rank_nminus1_reconstruct,
    reduced_linear_relations, square_grid, RelationVariant,
};
use sigmasurf::symalg::identity::{sample_points, scalar_residual};
use sigmasurf::{
    canonical_chart, tower, veronese, Complex64, Composition, ConjPoly, ProjectorField,
    RationalVector, Tower,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn ver(n: usize) -> Tower {
    tower(&veronese(n).expect("N ≥ 2")).expect("Veronese towers are nondegenerate")
}

fn c1() -> Outcome {
    let start = Instant::now();
    let points = sample_points(200, 3.0, 0xc1);
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 2..=8 {
        let t = ver(n);
        let g = tower(&common::generic_input(n, n as u64)).expect("generic input");
        for r in 1..n {
            let chart = canonical_chart(n, r).expect("valid rank");
            let mut fields = vec![
                sum_with(&t, Composition::front(r - 1)).expect("front sum"),
                sum_with(&g, Composition::front(r - 1)).expect("front sum"),
            ];
            let back = Composition::unweighted((n - r..n).collect()).expect("distinct");
            fields.push(sum_with(&t, back).expect("back sum"));
            if r == 1 {
                fields.extend((1..n).map(|k| member_projector(&t, k).expect("member")));
            }
            for p in &fields {
                for &z in &points {
                    let x = embed(p, &chart, z).expect("finite point");
                    worst = worst.max(x.quadratic_residual(&chart));
                }
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-10 && elapsed < Duration::from_secs(30),
        format!(
            "{cases} projectors x 200 points, max residual {worst:.2e}, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn c2() -> Outcome {
    let grid = square_grid(STANDARD_RADIUS, STANDARD_RES);
    let cases = [
        (3, Composition::single(1), 4.0, 2.0),
        (
            4,
            Composition::new(vec![0, 1, 2], vec![0.0, 1.0, 1.0]).unwrap(),
            6.0,
            4.0 / 3.0,
        ),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, comp, a_expected, k_expected) in cases {
        let t = ver(n);
        let p = sum_with(&t, comp.clone()).expect("valid sum");
        let a = veronese_metric_constant(n, &comp).expect("contiguous");
        let metric = metric_constant_residual(&p, a_expected);
        let k = gaussian_curvature_exact(&energy_density(&p)).expect("nondegenerate");
        let s = sample_curvature(&k, &grid);
        let k_err = s
            .values
            .iter()
            .map(|v| (v - k_expected).abs() / k_expected)
            .fold(0.0, f64::max);
        let from_a = (curvature_from_constant(a) - k_expected).abs() / k_expected;
        let ok = a == a_expected && metric < 1e-12 && k_err < 1e-12 && from_a < 1e-12;
        pass &= ok;
        parts.push(format!(
            "A({n},{comp})={a} metric residual {metric:.1e}, K rel err {k_err:.1e}"
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c3() -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=8 {
        let t = ver(n);
        for k in 0..n {
            let closed = veronese_norm_sq(n, k).expect("k < N");
            worst = worst.max(scalar_residual(&t.member(k).norm_sq, &closed));
        }
    }
    outcome(
        worst < 1e-12,
        format!("N=2..8, all k, max residual {worst:.2e}"),
    )
}

fn c4() -> Outcome {
    let mut worst = 0.0f64;
    let mut control = f64::INFINITY;
    for n in 2..=8 {
        let t = ver(n);
        for k in 0..n {
            worst = worst.max(symmetry_relation_residual(&t, k, 1.0).expect("k < N"));
            control = control.min(symmetry_relation_residual(&t, k, -1.0).expect("k < N"));
        }
    }
    outcome(
        worst < 1e-12 && control > 1e-2,
        format!("max residual {worst:.2e}; sign-flipped control min residual {control:.2e}"),
    )
}

fn c5() -> Outcome {
    let t3 = ver(3);
    let p1 = member_projector(&t3, 1).expect("member");
    let printed = common::golden_residual(&p1, common::cp2_p1(1.0), 1);
    let corrected = common::golden_residual(&p1, common::cp2_p1(-1.0), 1);
    let t4 = ver(4);
    let p12 = sum_projector(&t4, &[1, 2], None).expect("sum");
    let second = common::golden_residual(&p12, common::cp3_p1_p2(), 2);
    let r3 = reduced_structure_report(&p1);
    let r4 = reduced_structure_report(&p12);
    let structure = [&r3, &r4]
        .iter()
        .all(|r| r.all_hold() && r.orbit_count == 5 && r.affine_span_dim == 5);
    outcome(
        printed < 1e-12 && second < 1e-12 && structure,
        format!(
            "CP2 P1 as printed {printed:.2e} (with (1,3) = -4 xi_bar^2: {corrected:.2e}); \
             CP3 P1+P2 {second:.2e}; independent coordinates {} and {} (orbits), {} and {} (span)",
            r3.orbit_count, r4.orbit_count, r3.affine_span_dim, r4.affine_span_dim
        ),
    )
}

fn c6() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [5, 7] {
        let t = ver(n);
        let p = member_projector(&t, (n - 1) / 2).expect("middle member");
        for rel in reduced_linear_relations(n, &p).expect("odd N, middle member") {
            if rel.variant == RelationVariant::Printed {
                pass &= rel.holds;
            }
            parts.push(format!(
                "{} N={n} [{}] {}: {:.1e}",
                if rel.holds { "holds" } else { "fails" },
                match rel.variant {
                    RelationVariant::Printed => "printed",
                    RelationVariant::Family => "family",
                    RelationVariant::Corrected => "corrected",
                },
                rel.name,
                rel.residual
            ));
        }
    }
    let failing = parts.iter().filter(|p| p.starts_with("fails")).count();
    outcome(
        pass,
        format!(
            "{failing} quoted relation(s) fail\n    {}",
            parts.join("\n    ")
        ),
    )
}

/// `v v† / |v|²` for `v = (1, a ξ + b ξ̄, c ξ̄²)`, harmonic only when `b = c = 0`.
fn non_harmonic_field(rng: &mut ChaCha8Rng) -> ProjectorField {
    let a = Complex64::new(rng.gen_range(0.5..1.5), rng.gen_range(-0.5..0.5));
    let b = Complex64::new(rng.gen_range(0.5..1.5), rng.gen_range(-0.5..0.5));
    let c = rng.gen_range(0.2..1.0);
    let v = RationalVector::from_polys(vec![
        ConjPoly::one(),
        &ConjPoly::xi().scale(a) + &ConjPoly::xi_bar().scale(b),
        ConjPoly::xi_bar().pow(2).scale_real(c),
    ]);
    ProjectorField::rank1(&v).expect("nonzero")
}

fn c7() -> Outcome {
    let start = Instant::now();
    let t = ver(4);
    let from = Complex64::new(0.0, 0.0);
    let to = Complex64::new(1.0, 0.0);
    let mut gap = 0.0f64;
    for comp in [Composition::front(0), Composition::front(1)] {
        let p = sum_with(&t, comp).expect("front sum");
        gap = gap.max(path_independence(&p, from, to).expect("no poles").max_gap);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xc7);
    let mut control = f64::INFINITY;
    for _ in 0..8 {
        let p = non_harmonic_field(&mut rng);
        control = control.min(path_independence(&p, from, to).expect("no poles").max_gap);
    }
    let elapsed = start.elapsed();
    outcome(
        gap < 1e-8 && control > 1e-3 && elapsed < Duration::from_secs(10),
        format!(
            "harmonic max gap {gap:.2e}; 8 non-harmonic fields min gap {control:.2e}; {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn c8() -> Outcome {
    let t = tower(&common::cubic_input()).expect("nondegenerate");
    let p0 = member_projector(&t, 0).expect("member");
    let k = gaussian_curvature_exact(&energy_density(&p0)).expect("nondegenerate");
    let s = sample_curvature(&k, &square_grid(STANDARD_RADIUS, STANDARD_RES));
    outcome(
        s.spread > 1e-2,
        format!(
            "K in [{:.4}, {:.4}], relative spread {:.3}",
            s.min, s.max, s.spread
        ),
    )
}

fn c9() -> Outcome {
    let mut el = 0.0f64;
    let mut cons = 0.0f64;
    let mut count = 0;
    for n in 2..=6 {
        for t in [
            ver(n),
            tower(&common::generic_input(n, 90 + n as u64)).expect("generic"),
        ] {
            for k in 0..n {
                el = el.max(euler_lagrange_residual(
                    &member_projector(&t, k).expect("member"),
                ));
                cons = cons.max(conservation_residual(&t.member(k).vec).expect("nonzero"));
                count += 1;
            }
        }
    }
    let bad_el =
        RationalVector::from_polys(vec![ConjPoly::one(), &ConjPoly::xi() + &ConjPoly::xi_bar()]);
    let el_control = euler_lagrange_residual(&ProjectorField::rank1(&bad_el).expect("nonzero"));
    let bad_cons = RationalVector::from_polys(vec![ConjPoly::one(), ConjPoly::mod_sq()]);
    let cons_control = conservation_residual(&bad_cons).expect("nonzero");
    outcome(
        el < 1e-10 && cons < 1e-10 && el_control > 1e-3 && cons_control > 1e-3,
        format!(
            "{count} solutions: Euler-Lagrange {el:.2e}, conservation {cons:.2e}; \
             controls {el_control:.2e}, {cons_control:.2e}"
        ),
    )
}

/// `U diag(1,…,1,0,…,0) U†` for a random unitary `U`.
fn random_projector(rng: &mut ChaCha8Rng, n: usize, r: usize) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let q = g.qr().q();
    let cols = q.columns(0, r);
    cols * cols.adjoint()
}

fn c10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc10);
    let mut round = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(2..=8);
        let r = rng.gen_range(1..n);
        let chart = canonical_chart(n, r).expect("valid rank");
        let m = random_projector(&mut rng, n, r);
        let diag: Vec<f64> = m.diagonal().iter().map(|z| z.re).collect();
        let x = chart.diagonal_coordinates(&diag);
        let back = chart.unembed_diagonal(x.as_slice());
        for (a, b) in diag.iter().zip(&back) {
            round = round.max((a - b).abs());
        }
    }
    let mut recon = 0.0f64;
    let t = ver(5);
    let p0 = member_projector(&t, 0).expect("member");
    let complement = sum_projector(&t, &[1, 2, 3, 4], None).expect("sum");
    for z in sample_points(50, 2.0, 0x10) {
        let m = p0.eval(z).expect("no poles");
        let row: Vec<Complex64> = (0..5).map(|j| m[(0, j)]).collect();
        recon = recon.max((rank1_reconstruct(&row).expect("P11 > 0") - &m).amax_norm());
        let q = complement.eval(z).expect("no poles");
        let row: Vec<Complex64> = (0..5).map(|j| q[(0, j)]).collect();
        recon = recon.max((rank_nminus1_reconstruct(&row).expect("Q11 < 1") - &q).amax_norm());
    }
    outcome(
        round < 1e-12 && recon < 1e-12,
        format!("diagonal round trip {round:.2e} over 100 samples; first-row reconstruction {recon:.2e} at 50 points"),
    )
}

trait AmaxNorm {
    fn amax_norm(&self) -> f64;
}

impl AmaxNorm for DMatrix<Complex64> {
    fn amax_norm(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("C1 canonical quadratic", c1),
        ("C2 curvature constants", c2),
        ("C3 Veronese norm law", c3),
        ("C4 antidiagonal symmetry", c4),
        ("C5 reference matrices", c5),
        ("C6 reduced relations", c6),
        ("C7 path independence", c7),
        ("C8 nonconstant curvature", c8),
        ("C9 Euler-Lagrange and conservation", c9),
        ("C10 round trips", c10),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let o = check();
        println!(
            "{} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 && std::env::var_os("ACCEPTANCE_STRICT").is_some_and(|v| v == "1") {
        std::process::exit(1);
    }
}
