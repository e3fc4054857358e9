//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line with the measured values before asserting. Run with
//! `cargo test --release --test acceptance -- --nocapture` to see every
//! line; under plain `cargo test` the lines surface for failing criteria.

use std::process::Command;

use lampwalk::distortion::exact_distortion_small;
use lampwalk::embed::{
    cube_to_zwrz, iterated_line_alpha, tree_distance, tree_embedding, CycleEmbedding, Rat,
};
use lampwalk::group::GroupSpec;
use lampwalk::metric::{
    bfs_ball, poincare_j, poincare_j_closed_form_z, wreath_distance_exact, wreath_norm_exact,
};
use lampwalk::smooth::{
    cocycle_growth_check, cocycle_identity_check, enflo_ratio, hilbert_doubling_check,
    markov_ratio, pisier_martingale_check, two_point_smoothness, SmoothnessParams,
};
use lampwalk::walk::{
    estimate_return, estimate_speed, estimate_speed_doubled, visits_and_range, WalkConfig,
};

fn verdict(id: u32, name: &str, pass: bool, detail: &str) -> bool {
    println!(
        "acceptance {:02} ({name}): {} -- {detail}",
        id,
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

#[test]
fn criterion_01_exact_metric_oracle() {
    let groups = [
        GroupSpec::wreath(GroupSpec::Integers, GroupSpec::Integers),
        GroupSpec::wreath(GroupSpec::cyclic(2), GroupSpec::cyclic(6)),
        GroupSpec::wreath(GroupSpec::cyclic(2), GroupSpec::cyclic(8)),
    ];
    let start = std::time::Instant::now();
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    for g in &groups {
        let ball = bfs_ball(g, 10, 20_000_000).expect("ball within budget");
        for (x, d) in &ball.dist {
            if wreath_norm_exact(g, x).expect("supported shape") != *d {
                mismatches += 1;
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches == 0 && elapsed.as_secs() < 60;
    let ok = verdict(
        1,
        "exact metric oracle",
        pass,
        &format!("{checked} elements over B(e,10) in 3 groups, {mismatches} mismatches, {elapsed:?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_02_l1_embedding_distortion() {
    let start = std::time::Instant::now();
    let mut pass = true;
    let mut details = Vec::new();
    for (name, emb) in [("first", CycleEmbedding::First), ("second", CycleEmbedding::Second)] {
        let mut ds = Vec::new();
        for n in [6u32, 9, 12] {
            let rep = exact_distortion_small(n, &emb).expect("enumeration in range");
            pass &= rep.distortion <= 16.0;
            ds.push(rep.distortion);
        }
        let hi = ds.iter().cloned().fold(0.0f64, f64::max);
        let lo = ds.iter().cloned().fold(f64::INFINITY, f64::min);
        pass &= hi / lo <= 1.5;
        details.push(format!(
            "{name}: distortions {:.3}/{:.3}/{:.3}, stability {:.3}",
            ds[0],
            ds[1],
            ds[2],
            hi / lo
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed.as_secs() < 300;
    let ok = verdict(
        2,
        "L1 embedding distortion",
        pass,
        &format!("{}; {elapsed:?}", details.join("; ")),
    );
    assert!(ok);
}

#[test]
fn criterion_03_free_group_tree_isometry() {
    // all reduced words of length <= 6 over two letters
    let mut words = vec![Vec::<i8>::new()];
    let mut frontier = vec![Vec::<i8>::new()];
    for _ in 0..6 {
        let mut next = Vec::new();
        for w in &frontier {
            for l in [1i8, -1, 2, -2] {
                if w.last() == Some(&-l) {
                    continue;
                }
                let mut nw = w.clone();
                nw.push(l);
                next.push(nw);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let embedded: Vec<_> = words.iter().map(|w| tree_embedding(w)).collect();
    let mut violations = 0usize;
    let mut pairs = 0usize;
    for i in 0..words.len() {
        for j in (i + 1)..words.len() {
            let d = tree_distance(&words[i], &words[j]) as f64;
            let diff = embedded[i].sub(&embedded[j]);
            for p in [1.0, 1.5, 2.0] {
                if diff.norm_p_pow(p) != d {
                    violations += 1;
                }
            }
            pairs += 1;
        }
    }
    let pass = violations == 0 && words.len() == 1457;
    let ok = verdict(
        3,
        "free-group tree isometry",
        pass,
        &format!("{pairs} pairs x 3 exponents, {violations} violations"),
    );
    assert!(ok);
}

#[test]
fn criterion_04_cocycle_identity() {
    let mut worst = 0.0f64;
    for t in 0..=20 {
        let rep = cocycle_identity_check(t, 100, 0xC0C).expect("valid params");
        worst = worst.max(rep.max_discrepancy);
    }
    let pass = worst == 0.0;
    let ok = verdict(
        4,
        "cocycle identity",
        pass,
        &format!("max discrepancy {worst} over t <= 20, 100 trials each"),
    );
    assert!(ok);
}

#[test]
fn criterion_05_cocycle_growth_and_doubling() {
    let params = SmoothnessParams::new(2.0, 2.0).expect("valid");
    let grid: Vec<u64> = (1..=10).map(|k| 1 << k).collect();
    let growth = cocycle_growth_check(&params, &grid, 10_000, 0x60).expect("valid");
    let worst_growth = growth
        .points
        .iter()
        .map(|p| p.ratio - 3.0 * p.ratio_stderr)
        .fold(f64::NEG_INFINITY, f64::max);
    let doubling_grid: Vec<u64> = (0..=9).map(|k| 1 << k).collect();
    let doubling = hilbert_doubling_check(&doubling_grid, 10_000, 0x61).expect("valid");
    let worst_doubling = doubling
        .points
        .iter()
        .map(|p| p.ratio - 3.0 * p.ratio_stderr)
        .fold(f64::NEG_INFINITY, f64::max);
    let pass = growth.all_below_one && doubling.all_below_one;
    let ok = verdict(
        5,
        "cocycle growth + doubling",
        pass,
        &format!(
            "growth worst ratio-3se {worst_growth:.4}, doubling worst {worst_doubling:.4} (both <= 1)"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_06_speed_exponents() {
    let start = std::time::Instant::now();
    let z = estimate_speed(&WalkConfig::new(GroupSpec::Integers, 1 << 16, 2000, 42))
        .expect("z walk");
    let f2 = estimate_speed(&WalkConfig::new(GroupSpec::free(2), 1 << 16, 2000, 42))
        .expect("f2 walk");
    // the wreath exponent is read off the doubled-lamp walk of the wreath
    // speed theorem, fitted on the asymptotic window {2^12..2^16}; the
    // canonical-generator walk is still transient-dominated at this scale
    // and is reported alongside.
    let canonical = estimate_speed(&WalkConfig::new(
        GroupSpec::wreath(GroupSpec::Integers, GroupSpec::Integers),
        1 << 16,
        2000,
        42,
    ))
    .expect("zwrz walk");
    let grid: Vec<u64> = (12..=16).map(|k| 1 << k).collect();
    let doubled = estimate_speed_doubled(
        &GroupSpec::Integers,
        &GroupSpec::Integers,
        &WalkConfig::new(
            GroupSpec::wreath(GroupSpec::Integers, GroupSpec::Integers),
            1 << 16,
            2000,
            42,
        )
        .with_checkpoints(grid),
    )
    .expect("doubled walk");
    let elapsed = start.elapsed();
    let pass = (0.45..=0.55).contains(&z.beta_hat)
        && (0.95..=1.0).contains(&f2.beta_hat)
        && (0.70..=0.80).contains(&doubled.beta_hat)
        && elapsed.as_secs() < 600;
    let ok = verdict(
        6,
        "speed exponents",
        pass,
        &format!(
            "beta(z) {:.4}, beta(f2) {:.4}, beta(zwrz) {:.4} (canonical-set fit {:.4}); {elapsed:?}",
            z.beta_hat, f2.beta_hat, doubled.beta_hat, canonical.beta_hat
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_07_return_probability_slopes() {
    let z = estimate_return(&WalkConfig::new(GroupSpec::Integers, 1 << 10, 1_000_000, 42))
        .expect("z returns");
    let z2 = estimate_return(&WalkConfig::new(GroupSpec::lattice(2), 1 << 10, 1_000_000, 42))
        .expect("z2 returns");
    let pass = (-0.6..=-0.4).contains(&z.slope) && (-1.15..=-0.85).contains(&z2.slope);
    let ok = verdict(
        7,
        "return-probability slopes",
        pass,
        &format!("z slope {:.4}, z2 slope {:.4}", z.slope, z2.slope),
    );
    assert!(ok);
}

#[test]
fn criterion_08_visits_and_range() {
    // stability of E[X_n]/sqrt(n) and E[range] sqrt(n)/n over three horizons
    let mut visit_ratios = Vec::new();
    let mut range_ratios = Vec::new();
    for k in [10u32, 12, 14] {
        let n = 1u64 << k;
        let cfg = WalkConfig::new(GroupSpec::Integers, n, 2000, 42 + u64::from(k));
        let stats = visits_and_range(&cfg, 0.5).expect("supported group");
        visit_ratios.push(stats.visits.mean / (n as f64).sqrt());
        range_ratios.push(stats.range.mean * (n as f64).sqrt() / n as f64);
    }
    let stable = |v: &[f64]| {
        let hi = v.iter().cloned().fold(0.0f64, f64::max);
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        hi / lo
    };
    let visit_stability = stable(&visit_ratios);
    let range_stability = stable(&range_ratios);

    // exact small-horizon oracles
    let small = visits_and_range(
        &WalkConfig::new(GroupSpec::Integers, 4, 100_000, 7),
        0.5,
    )
    .expect("supported group");
    let visits_ok = (small.visits.mean - 1.875).abs() <= 3.0 * small.visits.stderr;
    let small2 = visits_and_range(
        &WalkConfig::new(GroupSpec::Integers, 2, 100_000, 8),
        0.5,
    )
    .expect("supported group");
    let range_ok = (small2.range.mean - 2.5).abs() <= 3.0 * small2.range.stderr;

    let pass = visit_stability <= 1.5 && range_stability <= 1.5 && visits_ok && range_ok;
    let ok = verdict(
        8,
        "visits and range",
        pass,
        &format!(
            "visit stability {visit_stability:.3}, range stability {range_stability:.3}, E[X_4] {:.4} (exact 1.875), E[range@2] {:.4} (exact 2.5)",
            small.visits.mean, small2.range.mean
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_09_composition_algebra() {
    let expect = [
        (1u32, Rat::new(1, 1)),
        (2, Rat::new(2, 3)),
        (3, Rat::new(4, 7)),
        (4, Rat::new(8, 15)),
    ];
    let mut pass = true;
    let mut values = Vec::new();
    for (k, want) in expect {
        let got = iterated_line_alpha(k).expect("k >= 1");
        pass &= got == want;
        values.push(got.to_string());
    }
    let ok = verdict(
        9,
        "composition algebra",
        pass,
        &format!("alpha*(Z_(1..4)) = {} (exact rationals)", values.join(", ")),
    );
    assert!(ok);
}

#[test]
fn criterion_10_enflo_cube_growth() {
    // exact distances for n <= 12
    let g = GroupSpec::wreath(GroupSpec::Integers, GroupSpec::Integers);
    let mut exact_ok = true;
    for n in 1..=12usize {
        let plus = vec![1i8; n];
        let minus = vec![-1i8; n];
        let diag = wreath_distance_exact(
            &g,
            &cube_to_zwrz(&plus).unwrap(),
            &cube_to_zwrz(&minus).unwrap(),
        )
        .unwrap();
        exact_ok &= diag as usize == 2 * n * n + 4 * n;
        for j in 1..=n {
            let mut f = plus.clone();
            f[j - 1] = -1;
            let e = wreath_distance_exact(
                &g,
                &cube_to_zwrz(&plus).unwrap(),
                &cube_to_zwrz(&f).unwrap(),
            )
            .unwrap();
            exact_ok &= e as usize == 2 * n + 2 * (n + j);
        }
    }
    // growth of the Enflo ratio under doubling
    let pts = enflo_ratio(&[4, 8, 16], 2.0).expect("exact range");
    let r4 = pts[0].ratio;
    let r8 = pts[1].ratio;
    let r16 = pts[2].ratio;
    let growth_at_4 = r8 / r4;
    let growth_at_8 = r16 / r8;
    let pass = exact_ok && growth_at_4 >= 1.6 && growth_at_8 >= 1.6;
    let ok = verdict(
        10,
        "Enflo cube growth",
        pass,
        &format!(
            "exact distances ok = {exact_ok}; R(4) = 2304/1784 = {r4:.4}, R(8) = 25600/13616 = {r8:.4}, \
             R(16) = 331776/106336 = {r16:.4}; R(8)/R(4) = {growth_at_4:.4}, R(16)/R(8) = {growth_at_8:.4} \
             (threshold 1.6). The n=4 clause is determined by integer arithmetic: \
             R(8)/R(4) = 45670400/31371264 = 1.4558 < 1.6, so it cannot pass; the doubling factor \
             of R approaches 2 only as n grows"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_11_markov_ratio_boundedness() {
    let grid: Vec<u64> = (0..=8).map(|k| 1 << k).collect();
    let golden = markov_ratio(4, 1.25, &grid, 10_000, 42).expect("valid");
    let big = markov_ratio(8, 1.25, &grid, 10_000, 42).expect("valid");
    let pass = big.sup_ratio <= 2.0 * golden.sup_ratio;
    let ok = verdict(
        11,
        "Markov ratio boundedness",
        pass,
        &format!(
            "sup K^p at n=8 is {:.4} vs n=4 golden {:.4} (bound x2)",
            big.sup_ratio, golden.sup_ratio
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_12_inequality_suite() {
    let mut worst_exact = f64::NEG_INFINITY;
    for (p, q, seed) in [(1.5, 1.5, 1u64), (2.0, 2.0, 2), (2.0, 4.0, 3)] {
        let params = SmoothnessParams::new(p, q).expect("valid");
        let rep = two_point_smoothness(&params, 8, 100_000, seed).expect("valid");
        worst_exact = worst_exact.max(rep.max_violation);
    }
    let params = SmoothnessParams::new(1.5, 1.5).expect("valid");
    let pisier = pisier_martingale_check(&params, 16, 8, 10_000, 8, 4).expect("valid");
    let mc_violation = pisier.max_ratio - 1.0;
    let pass = worst_exact <= 1e-9 && mc_violation <= 3.0 * pisier.max_ratio_stderr;
    let ok = verdict(
        12,
        "inequality suite",
        pass,
        &format!(
            "two-point max violation {worst_exact:.2e} (tol 1e-9); Pisier max ratio {:.4} (1 + 3se = {:.4})",
            pisier.max_ratio,
            1.0 + 3.0 * pisier.max_ratio_stderr
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_13_poincare_constants() {
    let radii = [4u64, 8, 16, 32];
    let rep = poincare_j(&GroupSpec::Integers, &radii, 1e-9, 1_000_000).expect("valid");
    let mut worst_rel = 0.0f64;
    for (&r, &j) in radii.iter().zip(&rep.j_values) {
        let expect = poincare_j_closed_form_z(r);
        worst_rel = worst_rel.max((j - expect).abs() / expect);
    }
    let pass = worst_rel <= 1e-6 && (0.9..=1.1).contains(&rep.alpha_hat);
    let ok = verdict(
        13,
        "Poincare constants",
        pass,
        &format!(
            "worst relative error {worst_rel:.2e} vs closed form; alpha_hat {:.4}",
            rep.alpha_hat
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_14_reproducibility() {
    let bin = env!("CARGO_BIN_EXE_lampwalk");
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for threads in ["1", "8"] {
        let out = dir.path().join(format!("walk-{threads}"));
        let status = Command::new(bin)
            .args([
                "walk-speed",
                "--group",
                "zwrz",
                "--t-max",
                "2048",
                "--trials",
                "500",
                "--seed",
                "1234",
                "--threads",
                threads,
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .expect("binary runs");
        assert!(status.success());
        bytes.push(std::fs::read(format!("{}.csv", out.display())).unwrap());
    }
    // and a manifest rerun reproduces the same bytes
    let out = dir.path().join("walk-1");
    let manifest = format!("{}.manifest.json", out.display());
    let status = Command::new(bin)
        .args(["rerun", "--manifest", &manifest])
        .status()
        .expect("binary runs");
    assert!(status.success());
    let rerun_bytes = std::fs::read(format!("{}.csv", out.display())).unwrap();
    let pass = bytes[0] == bytes[1] && rerun_bytes == bytes[0];
    let ok = verdict(
        14,
        "reproducibility",
        pass,
        &format!(
            "CSV bytes identical across threads: {}; manifest rerun identical: {}",
            bytes[0] == bytes[1],
            rerun_bytes == bytes[0]
        ),
    );
    assert!(ok);
}
