//! Acceptance checks, one line per criterion. Exits nonzero if any fails.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::{Duration, Instant};

use lsk::analysis::{classify_input, InputDescriptor, Settings};
use lsk::classify::{
    families_from_pencils, family_span, find_immersing_transform, isoparametric_witness, same_plane,
    ImmersionOptions, SphereMapSamples, Verdict,
};
use lsk::constructions::{predicted_curvature_spheres, SurfaceOfRevolution};
use lsk::corpus::{generate, generate_construction, synthetic_isoparametric_pencil, CircleProfile, ParamMap};
use lsk::curvature::{
    canonical_lie_curvature, dupin_residual, lie_curvature, pencil_grid, permutations4, AnalysisOptions,
};
use lsk::lift::{euclidean_lift, LegendreSample};
use lsk::linalg::{is_lie_transform, numerical_rank, random_lie_transform, restricted_signature};
use lsk::patch::{Jet, JetSource};
use lsk::quadric::{in_oriented_contact, sphere_to_point};
use lsk::{Ambient, Grid, LorentzVector, ProjectivePair, SubspaceBasis};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `−x₀y₀ + x₁y₁ + … − x_last y_last`, written out independently of the crate.
fn form(x: &[f64], y: &[f64]) -> f64 {
    let last = x.len() - 1;
    -x[0] * y[0] - x[last] * y[last] + (1..last).map(|i| x[i] * y[i]).sum::<f64>()
}

fn unit_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-2 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn quadric_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for i in 0..10_000 {
        let n = 3 + i % 4;
        let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let xi = unit_vec(&mut rng, n);
        let jet = Jet { u: vec![], f: DVector::from_vec(f), xi: DVector::from_vec(xi), df: vec![], dxi: vec![] };
        let s = LegendreSample::from_jet(jet, Ambient::Euclidean(n), JetSource::Analytic);
        let (k1, k2) = (s.y0.rep().as_slice(), s.y1.rep().as_slice());
        worst = worst.max(form(k1, k1).abs()).max(form(k2, k2).abs()).max(form(k1, k2).abs());
    }
    outcome(worst <= 1e-12, format!("max |<k,k>| = {worst:.2e} over 10000 pairs"))
}

/// Spheres centred on a circle of `S^n` with fixed radius.
fn circle_family(n: usize, count: usize) -> Vec<LorentzVector> {
    (0..count)
        .map(|i| {
            let s = 0.4 * i as f64;
            let mut c = vec![0.0; n + 1];
            c[0] = 0.8 * s.cos();
            c[1] = 0.8 * s.sin();
            c[2] = 0.6;
            sphere_to_point(&c, 0.4).unwrap().rep().clone()
        })
        .collect()
}

fn rows(vs: &[LorentzVector]) -> DMatrix<f64> {
    DMatrix::from_fn(vs.len(), vs[0].len(), |i, j| vs[i].coords()[j])
}

fn lie_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut drift: f64 = 0.0;
    let mut mismatches = Vec::new();
    for t in 0..100u64 {
        let n = 3 + (t % 4) as usize;
        let d = n + 3;
        let a = random_lie_transform(1000 + t, n, 1.0).unwrap();
        let vecs: Vec<LorentzVector> =
            (0..6).map(|_| LorentzVector::new((0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()).collect();
        let moved: Vec<LorentzVector> = vecs.iter().map(|v| a.apply(v).unwrap()).collect();
        for i in 0..vecs.len() {
            for j in 0..vecs.len() {
                let before = form(vecs[i].as_slice(), vecs[j].as_slice());
                let after = form(moved[i].as_slice(), moved[j].as_slice());
                drift = drift.max((before - after).abs());
            }
        }
        // a tangent pair and a separated pair
        let p = unit_vec(&mut rng, n + 1);
        let (r1, r2) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let q_dir = {
            let v = unit_vec(&mut rng, n + 1);
            let dot: f64 = v.iter().zip(&p).map(|(a, b)| a * b).sum::<f64>();
            let w: Vec<f64> = v.iter().zip(&p).map(|(a, b)| a - dot * b).collect();
            let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            w.iter().map(|x| x / nw).collect::<Vec<f64>>()
        };
        let at = |delta: f64| -> Vec<f64> {
            let v: Vec<f64> = p.iter().zip(&q_dir).map(|(a, b)| delta.cos() * a + delta.sin() * b).collect();
            let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter().map(|x| x / nv).collect()
        };
        let s1 = sphere_to_point(&p, r1).unwrap();
        let tangent = sphere_to_point(&at(r1 - r2), r2).unwrap();
        let apart = sphere_to_point(&at(r1 - r2 + 0.3), r2).unwrap();
        let image = |s: &lsk::QuadricPoint| lsk::QuadricPoint::new(a.apply(s.rep()).unwrap(), 1e-8).unwrap();
        for (other, label) in [(&tangent, "tangent"), (&apart, "apart")] {
            if in_oriented_contact(&s1, other, 1e-9) != in_oriented_contact(&image(&s1), &image(other), 1e-9) {
                mismatches.push(format!("transform {t}: contact of {label} pair"));
            }
        }
        // span rank and signature of a circle family and its complement
        let fam = circle_family(n, 10);
        let fam_moved: Vec<LorentzVector> = fam.iter().map(|v| a.apply(v).unwrap()).collect();
        let r0 = numerical_rank(&rows(&fam), 1e-8).unwrap();
        let r1_ = numerical_rank(&rows(&fam_moved), 1e-8).unwrap();
        if r0.rank != r1_.rank {
            mismatches.push(format!("transform {t}: span rank {} vs {}", r0.rank, r1_.rank));
        }
        let s0 = family_span(&SphereMapSamples::new(0, 1, fam, 1e-10).unwrap(), 1e-8, 1e-8).unwrap();
        let s1_ = family_span(&SphereMapSamples::new(0, 1, fam_moved, 1e-8).unwrap(), 1e-8, 1e-8).unwrap();
        if s0.perp_signature != s1_.perp_signature {
            mismatches.push(format!("transform {t}: E-perp signature {:?} vs {:?}", s0.perp_signature, s1_.perp_signature));
        }
        for k in 1..=3 {
            let basis = SubspaceBasis::from_vectors(d, &vecs[..k]).unwrap();
            let moved_basis = SubspaceBasis::from_vectors(d, &moved[..k]).unwrap();
            let (x, y) = (restricted_signature(&basis, 1e-8).unwrap(), restricted_signature(&moved_basis, 1e-8).unwrap());
            if x != y {
                mismatches.push(format!("transform {t}: signature {x:?} vs {y:?}"));
            }
        }
    }
    let ok = drift <= 1e-9 && mismatches.is_empty();
    let mut detail = format!("max inner product drift {drift:.2e}, {} integer mismatches", mismatches.len());
    if let Some(m) = mismatches.first() {
        detail.push_str(&format!(" (first: {m})"));
    }
    outcome(ok, detail)
}

fn torus_oracle() -> Outcome {
    let (big, a) = (2.0, 0.5);
    let profile = Arc::new(CircleProfile::new(big, a).unwrap());
    let rev = SurfaceOfRevolution::new(profile.clone(), 1).unwrap();
    let opts = AnalysisOptions::default();
    let grid = Grid::new(vec![64, 64]);
    let pencils = pencil_grid(&rev, &grid, &opts).unwrap();
    let mut g_ok = true;
    let mut kappa_err: f64 = 0.0;
    let mut sphere_err: f64 = 0.0;
    for p in &pencils {
        g_ok &= p.g() == 2;
        let t = p.u()[0];
        let mut expected = [-1.0 / a, -t.cos() / (big + a * t.cos())];
        expected.sort_by(f64::total_cmp);
        let mut got = p.kappas();
        got.sort_by(f64::total_cmp);
        for (x, y) in got.iter().zip(expected) {
            kappa_err = kappa_err.max((x - y).abs());
        }
        let profile_pencil = lsk::curvature::curvature_pencil(profile.as_ref(), &p.u()[..1], &opts).unwrap();
        let kappas: Vec<ProjectivePair> = profile_pencil.curvatures().iter().map(|c| c.kappa).collect();
        let sample = euclidean_lift(&rev, p.u(), &opts.jet).unwrap();
        let pred = predicted_curvature_spheres(&kappas, rev.axial_components(&p.u()[..1]), &sample).unwrap();
        if pred.distinct.len() != p.spheres.len() {
            sphere_err = f64::INFINITY;
        }
        for s in &pred.distinct {
            let best = p
                .spheres
                .iter()
                .map(|t| lsk::quadric::projective_distance(s.rep().coords(), t.rep().coords()))
                .fold(f64::INFINITY, f64::min);
            sphere_err = sphere_err.max(best);
        }
    }
    let dupin = dupin_residual(&rev, &grid, &opts).unwrap();
    let ok = g_ok && kappa_err <= 1e-6 && dupin.max_residual <= 1e-6 && sphere_err <= 1e-6;
    outcome(
        ok,
        format!(
            "g = 2 everywhere: {g_ok}, curvature error {kappa_err:.2e}, dupin residual {:.2e}, sphere mismatch {sphere_err:.2e}",
            dupin.max_residual
        ),
    )
}

fn orbit(r: f64) -> [f64; 6] {
    [r, 1.0 / r, 1.0 - r, 1.0 / (1.0 - r), r / (r - 1.0), (r - 1.0) / r]
}

fn distinct_values(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + b.abs()));
    v
}

fn cross_ratio_orbit() -> Outcome {
    let kappas: Vec<f64> = (0..4).map(|k| 1.0 / (PI / 8.0 + k as f64 * PI / 4.0).tan()).collect();
    let mults = [1, 2, 1, 2];
    let data: Vec<(ProjectivePair, usize)> = kappas.iter().zip(mults).map(|(k, m)| (ProjectivePair::finite(*k), m)).collect();
    let lc = canonical_lie_curvature(&data).unwrap();
    let pairing_ok = lc.pairing_available && mults[lc.ordering[0]] == mults[lc.ordering[1]] && mults[lc.ordering[2]] == mults[lc.ordering[3]];
    let value_ok = (lc.r + 1.0).abs() <= 1e-12;
    let mut orbit_ok = true;
    let mut half_seen = false;
    let mut sizes = Vec::new();
    for ks in [kappas.clone(), vec![-2.0, -0.5, 0.7, 3.0]] {
        let pairs: Vec<ProjectivePair> = ks.iter().map(|k| ProjectivePair::finite(*k)).collect();
        let all: Vec<f64> =
            permutations4().iter().map(|p| lie_curvature(&p.map(|i| pairs[i])).unwrap()).collect();
        half_seen |= all.iter().any(|v| (v - 0.5).abs() < 1e-12);
        let got = distinct_values(all.clone());
        let want = distinct_values(orbit(all[0]).to_vec());
        orbit_ok &= got.len() == want.len() && got.iter().zip(&want).all(|(a, b)| (a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        sizes.push(got.len());
    }
    orbit_ok &= sizes[1] == 6;
    outcome(
        pairing_ok && value_ok && orbit_ok && half_seen,
        format!(
            "canonical r = {:.15} (ordering {:?}, pairing {}), 1/2 among orderings: {half_seen}, orbit sizes {sizes:?} match: {orbit_ok}",
            lc.r, lc.ordering, pairing_ok
        ),
    )
}

fn reducibility_taxonomy() -> Outcome {
    let opts = AnalysisOptions::default();
    let grid = Grid::new(vec![32, 12]);
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, want_pos_extra, want_neg, want_null) in
        [("revolved_circle", 1, 0, 0), ("tubed_circle", 0, 1, 0), ("cylinder_circle", 0, 0, 1)]
    {
        let c = generate_construction(name, &ParamMap::new()).unwrap().unwrap();
        let pencils = pencil_grid(c.as_ref(), &grid, &opts).unwrap();
        let families = families_from_pencils(&pencils).unwrap();
        // the family whose curvature the construction added
        let new = pencils[0]
            .curvatures()
            .iter()
            .position(|k| lsk::constructions::same_curvature(&k.kappa, &c.new_curvature(pencils[0].u()), 1e-6))
            .unwrap();
        let span = family_span(&families[new], 1e-8, 1e-8).unwrap();
        let sig = span.perp_signature;
        let good = span.reducible == Verdict::Yes
            && span.m.zip(sig).is_some_and(|(m, s)| s.pos == m + want_pos_extra && s.neg == want_neg && s.null == want_null);
        ok &= good;
        parts.push(format!(
            "{name}: m = {:?}, E-perp {:?} {}",
            span.m,
            sig.map(|s| (s.pos, s.neg, s.null)),
            if good { "as expected" } else { "UNEXPECTED" }
        ));
    }
    // constructions over a torus whose sphere maps span the whole space
    for name in ["revolved_torus", "cylinder_torus"] {
        let c = generate_construction(name, &ParamMap::new()).unwrap().unwrap();
        let pencils = pencil_grid(c.as_ref(), &Grid::new(vec![10, 10, 8]), &opts).unwrap();
        let families = families_from_pencils(&pencils).unwrap();
        let new = pencils[0]
            .curvatures()
            .iter()
            .position(|k| lsk::constructions::same_curvature(&k.kappa, &c.new_curvature(pencils[0].u()), 1e-6))
            .unwrap();
        let span = family_span(&families[new], 1e-8, 1e-8).unwrap();
        parts.push(format!(
            "[info] {name}: m = {:?}, E-perp {:?}, {:?}",
            span.m,
            span.perp_signature.map(|s| (s.pos, s.neg, s.null)),
            span.construction
        ));
    }
    outcome(ok, parts.join("; "))
}

fn witness_recovery() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for seed in 0..50u64 {
        for conjugate in [false, true] {
            let syn = synthetic_isoparametric_pencil(seed, 5, 64, conjugate).unwrap();
            let search = isoparametric_witness(&syn.families, 1e-8, true).unwrap();
            match search.witness {
                Some(w) if same_plane(&w.w1, &w.w2, syn.w1.as_slice(), syn.w2.as_slice(), 1e-6) => {
                    worst = worst.max(w.replay_residual);
                }
                Some(_) => failures.push(format!("seed {seed} conjugate {conjugate}: wrong plane")),
                None => failures.push(format!("seed {seed} conjugate {conjugate}: {:?}", search.verdict)),
            }
        }
    }
    let mut negatives = Vec::new();
    for i in 0..10 {
        let eps = 0.3 + 0.04 * i as f64;
        let t_min = 0.9 + 0.02 * i as f64;
        let params = ParamMap::new().with("t_min", t_min).with("t_max", t_min + 1.0).with("eps", eps);
        let settings = Settings { grid: Some(Grid::new(vec![5, 6, 6, 6])), immersion: None, ..Settings::default() };
        let report = classify_input(InputDescriptor::named("iterated_pinkall", params), &settings).unwrap();
        let g = report.curvature.as_ref().map(|c| c.g);
        let verdict = report.witness.as_ref().map(|w| w.verdict);
        if g != Some(4) || verdict == Some(Verdict::Yes) {
            failures.push(format!("iterated example {i}: g = {g:?}, witness {verdict:?}"));
        }
        negatives.push(verdict.map_or("none".to_string(), |v| format!("{v:?}")));
    }
    negatives.dedup();
    let mut detail = format!("100 synthetic cases, max replay residual {worst:.2e}; iterated examples: {}", negatives.join("/"));
    if !failures.is_empty() {
        detail.push_str(&format!("; {} failures (first: {})", failures.len(), failures[0]));
    }
    outcome(worst <= 1e-8 && failures.is_empty(), detail)
}

fn immersing_transform() -> Outcome {
    let torus = generate("torus", &ParamMap::new()).unwrap();
    let pencils = pencil_grid(torus.as_ref(), &Grid::new(vec![48, 48]), &AnalysisOptions::default()).unwrap();
    let samples: Vec<LorentzVector> = pencils.iter().flat_map(|p| p.spheres.iter().map(|s| s.rep().clone())).collect();
    let search = find_immersing_transform(&samples, &ImmersionOptions::default()).unwrap();
    let v = &search.v;
    let min = samples
        .iter()
        .map(|k| form(k.as_slice(), v).abs() / k.norm())
        .fold(f64::INFINITY, f64::min);
    let (lie_ok, sends) = match &search.transform {
        Some(a) => {
            let image = a.apply_raw(&DVector::from_column_slice(v));
            let mut target = DVector::zeros(v.len());
            target[v.len() - 1] = 1.0;
            (is_lie_transform(a.matrix(), 1e-10).unwrap(), (image - target).amax())
        }
        None => (false, f64::INFINITY),
    };
    let ok = min >= 1e-3 && lie_ok && sends <= 1e-10;
    outcome(
        ok,
        format!("min |<k, v>| = {min:.3e} over {} spheres, A in O(n+1,2): {lie_ok}, |Av - e_last| = {sends:.1e}", samples.len()),
    )
}

fn negative_control() -> Outcome {
    let opts = AnalysisOptions::default();
    let ellipsoid = generate("ellipsoid", &ParamMap::new()).unwrap();
    let e = dupin_residual(ellipsoid.as_ref(), &Grid::new(vec![24, 24]), &opts).unwrap();
    let product = generate("product_of_spheres", &ParamMap::new().with("n", 3.0).with("k", 1.0).with("r", 0.6).with("s", 0.8)).unwrap();
    let grid = Grid::new(vec![24, 24]);
    let pencils = pencil_grid(product.as_ref(), &grid, &opts).unwrap();
    let shapes_ok = pencils.iter().all(|p| p.g() == 2 && p.multiplicities() == vec![1, 1]);
    let p = dupin_residual(product.as_ref(), &grid, &opts).unwrap();
    let ok = e.max_residual > 1e-2 && shapes_ok && p.is_dupin;
    outcome(
        ok,
        format!(
            "ellipsoid residual {:.3e}; S1(0.6)xS1(0.8): g = 2 with (1, 1) everywhere: {shapes_ok}, residual {:.2e}",
            e.max_residual, p.max_residual
        ),
    )
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 8] = [
        ("1 quadric and contact identities of the Euclidean lift", Duration::from_secs(1), quadric_identities),
        ("2 invariance under Lie sphere transformations", Duration::from_secs(10), lie_invariance),
        ("3 revolved circle against the analytic torus", Duration::from_secs(30), torus_oracle),
        ("4 Lie curvature normalization and cross-ratio orbit", Duration::from_secs(1), cross_ratio_orbit),
        ("5 reducibility taxonomy of circle constructions", Duration::from_secs(60), reducibility_taxonomy),
        ("6 isoparametric witness recovery", Duration::from_secs(300), witness_recovery),
        ("7 immersing transformation for the torus", Duration::from_secs(30), immersing_transform),
        ("8 negative control", Duration::from_secs(30), negative_control),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let out = check();
        let took = start.elapsed();
        let ok = out.ok && took <= budget;
        failed += usize::from(!ok);
        println!(
            "{} {name}: {} [{:.2} s of {} s]",
            if ok { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
}
