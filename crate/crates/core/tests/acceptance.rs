//! Acceptance gate: each criterion prints one PASS/FAIL line and the test
//! fails if any criterion fails.

mod common;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{
    is_power_of, m1_oracle, random_similitude, random_unit, random_vec, ring, rng, span_oracle,
    weil_oracle,
};
use mu_torsion::cli::{execute, parse_config, ReportDocument};
use mu_torsion::galois_model::{
    self, congruence_chain, degree_kh, filtered_subgroup, gl2_group, orbit_size, scenario_cm,
    scenario_selfproduct, stabilizer,
};
use mu_torsion::mumford::{
    image_order, lagrangian_h, pointwise_stabilizer_in_image, rho, tensor_space,
    verify_mu_s_failure, LAGRANGIAN_INDICES,
};
use mu_torsion::{Error, MatrixGroup, MatrixMod, ResidueRing, SymplecticSpace, TorsionSubgroup};
use num_rational::Ratio;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const CAP: u64 = 1 << 24;

fn all_gl2(r: ResidueRing) -> Vec<MatrixMod> {
    let q = r.modulus() as i64;
    let mut out = Vec::new();
    for k in 0..q.pow(4) {
        let e = |i: u32| (k / q.pow(i)) % q;
        if (e(0) * e(3) - e(1) * e(2)).rem_euclid(q) != 0 {
            out.push(MatrixMod::from_rows(r, &[vec![e(0), e(1)], vec![e(2), e(3)]]).unwrap());
        }
    }
    out
}

fn unit_vector(i: usize) -> Vec<u64> {
    (0..8).map(|j| u64::from(i == j)).collect()
}

fn criterion_1() -> Outcome {
    let mut timings = Vec::new();
    for ell in [2u64, 3, 5, 7] {
        let r = ResidueRing::field(ell).unwrap();
        let start = Instant::now();
        let stab: BTreeSet<MatrixMod> = pointwise_stabilizer_in_image(ell, CAP)
            .map_err(|e| e.to_string())?
            .into_iter()
            .collect();
        let elapsed = start.elapsed();
        let mut expected = BTreeSet::from([MatrixMod::identity(r, 8)]);
        expected.insert(MatrixMod::diagonal(r, &[1, -1, -1, 1, -1, 1, 1, -1]));
        ensure!(
            stab == expected,
            "l = {ell}: stabilizer has {} elements, expected {}",
            stab.len(),
            expected.len()
        );
        ensure!(
            ell != 2 || stab.len() == 1,
            "l = 2 must collapse to the identity"
        );
        let limit = match ell {
            3 => Some(Duration::from_secs(10)),
            7 => Some(Duration::from_secs(300)),
            _ => None,
        };
        if let Some(limit) = limit {
            ensure!(
                elapsed <= limit,
                "l = {ell} took {elapsed:?} (limit {limit:?})"
            );
        }
        timings.push(format!("l={ell} {:.2}s", elapsed.as_secs_f64()));
    }
    Ok(timings.join(", "))
}

fn criterion_2() -> Outcome {
    let reports =
        verify_mu_s_failure(&[3, 5, 7], Ratio::from_integer(2), CAP).map_err(|e| e.to_string())?;
    for r in &reports {
        ensure!(r.m1 == 0, "l = {}: m1 = {}", r.ell, r.m1);
        let expected = (r.ell - 1) / 2;
        ensure!(
            r.deg_cyclo_intersection == expected,
            "l = {}: intersection degree {} != {expected}",
            r.ell,
            r.deg_cyclo_intersection
        );
        ensure!(
            r.ratio == Ratio::from_integer(expected),
            "l = {}: ratio {}",
            r.ell,
            r.ratio
        );
    }
    let config = parse_config([
        "mu-torsion",
        "sweep",
        "mumford",
        "--ell",
        "3,5,7",
        "--format",
        "json",
    ])
    .map_err(|e| e.to_string())?;
    let doc: ReportDocument =
        serde_json::from_str(&execute(&config).map_err(|e| e.to_string())?).unwrap();
    let ratios: Vec<Ratio<u64>> = doc.reports.iter().map(|r| r.ratio).collect();
    ensure!(
        ratios == [1, 2, 3].map(Ratio::from_integer),
        "sweep ratios {ratios:?}"
    );
    let summary = doc.summary.ok_or("sweep summary missing")?;
    ensure!(
        summary.monotone,
        "sweep summary not flagged strictly increasing"
    );
    Ok("ratios 1, 2, 3; m1 = 0; summary monotone".into())
}

fn criterion_3() -> Outcome {
    #[rustfmt::skip]
    let printed: [[i64; 8]; 8] = [
        [0, 0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, -1, 0],
        [0, 0, 0, 0, 0, -1, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, -1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, 0],
        [-1, 0, 0, 0, 0, 0, 0, 0],
    ];
    for ell in [3u64, 5, 7, 11] {
        let space = tensor_space(ell).map_err(|e| e.to_string())?;
        let r = space.ring();
        for (i, row) in printed.iter().enumerate() {
            for (j, &entry) in row.iter().enumerate() {
                ensure!(
                    space.form().get(i, j) == r.reduce(entry),
                    "l = {ell}: entry ({i},{j}) differs"
                );
            }
        }
        let mut pairs = 0;
        for (a, &i) in LAGRANGIAN_INDICES.iter().enumerate() {
            for &j in &LAGRANGIAN_INDICES[a + 1..] {
                let e = space
                    .weil_pairing(&unit_vector(i), &unit_vector(j), 1)
                    .map_err(|e| e.to_string())?;
                ensure!(e.exponent().value() == 0, "l = {ell}: e(e{i}, e{j}) != 0");
                pairs += 1;
            }
        }
        ensure!(pairs == 6, "expected six basis pairings");
        let h = lagrangian_h(ell).map_err(|e| e.to_string())?;
        ensure!(
            space.m1(&h).map_err(|e| e.to_string())? == 0,
            "l = {ell}: m1(H) != 0"
        );
        ensure!(h.rank() == 4, "H must be 4-dimensional");
    }
    Ok("64 entries equal for l in {3,5,7,11}; 6 pairings vanish".into())
}

/// Groups all triples by image and checks that fibres are exactly the
/// scalar orbits `(λa, μb, νc)` with `λμν = 1`.
fn kernel_law_exhaustive(ell: u64) -> Result<usize, String> {
    let r = ring(ell, 1);
    let all = all_gl2(r);
    let mut fibres: HashMap<MatrixMod, Vec<(usize, usize, usize)>> = HashMap::new();
    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate() {
            for (k, c) in all.iter().enumerate() {
                fibres
                    .entry(rho(a, b, c).unwrap())
                    .or_default()
                    .push((i, j, k));
            }
        }
    }
    let expected_fibre = ((ell - 1) * (ell - 1)) as usize;
    for members in fibres.values() {
        ensure!(
            members.len() == expected_fibre,
            "fibre of size {}",
            members.len()
        );
        let (i0, j0, k0) = members[0];
        for &(i, j, k) in members {
            let ratio = |x: &MatrixMod, y: &MatrixMod| -> Option<u64> {
                let p = x.entries().iter().position(|&v| v != 0)?;
                let s = r.mul(y.entries()[p], r.inv(x.entries()[p])?);
                (x.scale(s) == *y).then_some(s)
            };
            let l = ratio(&all[i0], &all[i]).ok_or("a not a scalar multiple")?;
            let m = ratio(&all[j0], &all[j]).ok_or("b not a scalar multiple")?;
            let n = ratio(&all[k0], &all[k]).ok_or("c not a scalar multiple")?;
            ensure!(r.mul(l, r.mul(m, n)) == 1, "scalars do not multiply to 1");
        }
    }
    Ok(fibres.len())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let order = image_order(3, CAP).map_err(|e| e.to_string())?;
    ensure!(order == 27648, "image_order(3) = {order}");
    let distinct = kernel_law_exhaustive(3)?;
    ensure!(
        distinct as u64 == order,
        "dedup found {distinct} images, formula {order}"
    );
    let distinct2 = kernel_law_exhaustive(2)?;
    ensure!(
        distinct2 as u64 == image_order(2, CAP).unwrap(),
        "l = 2 image order mismatch"
    );
    let elapsed = start.elapsed();
    ensure!(elapsed <= Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!(
        "27648 distinct images of 48^3 triples; kernel law exact for l = 2, 3 ({:.1}s)",
        elapsed.as_secs_f64()
    ))
}

fn criterion_5() -> Outcome {
    let mut seen = Vec::new();
    for ell in [5u64, 13] {
        for g in [1usize, 2] {
            let (group, h) = scenario_cm(g, ell, 1, CAP).map_err(|e| e.to_string())?;
            let t = stabilizer(&group, &h).map_err(|e| e.to_string())?;
            ensure!(
                t.order() == Some(1),
                "cm l = {ell}, g = {g}: stabilizer of order {:?}",
                t.order()
            );
            let report = galois_model::degree_report(&group, &h, Ratio::from_integer(2))
                .map_err(|e| e.to_string())?;
            ensure!(report.m1 == 0, "cm l = {ell}: m1 = {}", report.m1);
            ensure!(
                report.deg_cyclo_intersection == ell - 1,
                "cm l = {ell}: intersection {}",
                report.deg_cyclo_intersection
            );
            ensure!(
                report.ratio == Ratio::from_integer(ell - 1),
                "cm l = {ell}: ratio {}",
                report.ratio
            );
        }
        seen.push(format!("cm l={ell} ratio {}", ell - 1));
    }
    for ell in [3u64, 5] {
        let (group, h) = scenario_selfproduct(ell, 1, CAP).map_err(|e| e.to_string())?;
        let report = galois_model::degree_report(&group, &h, Ratio::from_integer(2))
            .map_err(|e| e.to_string())?;
        ensure!(report.m1 == 0, "selfproduct l = {ell}: m1 = {}", report.m1);
        ensure!(
            report.deg_cyclo_intersection == ell - 1,
            "selfproduct l = {ell}: intersection {}",
            report.deg_cyclo_intersection
        );
        seen.push(format!("selfproduct l={ell} intersection {}", ell - 1));
    }
    Ok(seen.join("; "))
}

fn criterion_6() -> Outcome {
    let mut g = rng(0xacce_0006);
    let mut checked = 0;
    let mut nontrivial = 0;
    while checked < 200 {
        let r = ring([2u64, 3, 5][g.gen_range(0..3)], g.gen_range(1..=3));
        let genus = g.gen_range(1..=2);
        let gens: Vec<Vec<u64>> = (0..g.gen_range(1..=3))
            .map(|_| random_vec(&mut g, r, 2 * genus))
            .collect();
        let h = TorsionSubgroup::from_generators(r, 2 * genus, &gens).unwrap();
        if h.order().unwrap() > 5000 {
            continue;
        }
        let space = SymplecticSpace::standard(genus, r).unwrap();
        let fast = space.m1(&h).map_err(|e| e.to_string())?;
        let exhaustive = space.m1_exhaustive(&h, 5000).map_err(|e| e.to_string())?;
        let oracle = m1_oracle(r, genus, &span_oracle(r, 2 * genus, &gens));
        ensure!(
            fast == exhaustive && fast == oracle,
            "disagreement: fast {fast}, exhaustive {exhaustive}, oracle {oracle} for {gens:?} over {r}"
        );
        nontrivial += usize::from(fast > 0);
        checked += 1;
    }
    Ok(format!(
        "200 subgroups, 0 disagreements ({nontrivial} with m1 > 0)"
    ))
}

fn criterion_7() -> Outcome {
    let mut g = rng(0xacce_0007);
    for _ in 0..500 {
        let ell = [2u64, 3, 5, 7][g.gen_range(0..4)];
        let level = g.gen_range(1..=3);
        let genus = g.gen_range(1..=3);
        let r = ring(ell, level);
        let space = SymplecticSpace::standard(genus, r).unwrap();
        let n = g.gen_range(1..=level);
        let t = r.at_level(n).unwrap();
        let d = ell.pow(level - n);
        let mut point = || -> Vec<u64> {
            random_vec(&mut g, r, 2 * genus)
                .iter()
                .map(|&x| r.mul(x, d))
                .collect()
        };
        let (p, q, s) = (point(), point(), point());
        let e = |x: &[u64], y: &[u64]| space.weil_pairing(x, y, n).unwrap().exponent().value();
        let add = |x: &[u64], y: &[u64]| -> Vec<u64> {
            x.iter().zip(y).map(|(&a, &b)| r.add(a, b)).collect()
        };
        ensure!(
            e(&p, &q) == weil_oracle(r, genus, &p, &q, n),
            "pairing differs from oracle"
        );
        ensure!(
            e(&add(&p, &s), &q) == t.add(e(&p, &q), e(&s, &q)),
            "not additive in the first slot"
        );
        ensure!(
            e(&p, &add(&q, &s)) == t.add(e(&p, &q), e(&p, &s)),
            "not additive in the second slot"
        );
        ensure!(e(&p, &p) == 0, "not alternating");
        ensure!(e(&q, &p) == t.neg(e(&p, &q)), "not antisymmetric");
        let lambda = random_unit(&mut g, r);
        let m = random_similitude(&mut g, &space, lambda);
        let (mp, mq) = (m.mul_vec(&p), m.mul_vec(&q));
        ensure!(
            e(&mp, &mq) == t.mul(t.reduce_u(lambda), e(&p, &q)),
            "e(MP, MQ) != lambda(M) e(P, Q)"
        );
    }
    Ok("500 instances: bilinear, alternating, GSp-equivariant".into())
}

fn cyclic_subgroups(r: ResidueRing) -> Vec<TorsionSubgroup> {
    let q = r.modulus();
    let mut seen: HashSet<Vec<Vec<u64>>> = HashSet::new();
    let mut out = Vec::new();
    for x in 0..q {
        for y in 0..q {
            let h = TorsionSubgroup::from_generators(r, 2, &[vec![x, y]]).unwrap();
            let mut elements = h.elements(q).unwrap();
            elements.sort();
            if seen.insert(elements) {
                out.push(h);
            }
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut cyclic_checked = 0;
    for ell in [3u64, 5] {
        for m in 1..=3 {
            let r = ring(ell, m);
            let group = gl2_group(r).map_err(|e| e.to_string())?;
            for h in cyclic_subgroups(r) {
                let whole = degree_kh(&group, &h).map_err(|e| e.to_string())?;
                let torsion = degree_kh(&group, &h.slice(1)).map_err(|e| e.to_string())?;
                ensure!(
                    whole % torsion == 0,
                    "l = {ell}, m = {m}: {torsion} does not divide {whole}"
                );
                ensure!(
                    is_power_of(whole / torsion, ell),
                    "l = {ell}, m = {m}: ratio {} not a power",
                    whole / torsion
                );
                let k = h.orders().first().copied().unwrap_or(0);
                let expected = if k == 0 {
                    1
                } else {
                    ell.pow(2 * k) - ell.pow(2 * k - 2)
                };
                ensure!(
                    whole == expected,
                    "l = {ell}, m = {m}: degree {whole} != point count {expected}"
                );
                cyclic_checked += 1;
            }
        }
    }
    let mut g = rng(0xacce_0008);
    let mut filtered_checked = 0;
    for ell in [3u64, 5] {
        let g2 = gl2_group(ring(ell, 2))
            .unwrap()
            .materialize(CAP)
            .map_err(|e| e.to_string())?;
        let g1 = gl2_group(ring(ell, 1))
            .unwrap()
            .materialize(CAP)
            .map_err(|e| e.to_string())?;
        let mut subgroups = cyclic_subgroups(ring(ell, 2));
        for _ in 0..10 {
            let gens = vec![
                random_vec(&mut g, ring(ell, 2), 2),
                random_vec(&mut g, ring(ell, 2), 2),
            ];
            subgroups.push(TorsionSubgroup::from_generators(ring(ell, 2), 2, &gens).unwrap());
        }
        for h in subgroups {
            let chain = congruence_chain(&h);
            let t2 = filtered_subgroup(&g2, &chain).map_err(|e| e.to_string())?;
            let t1 = filtered_subgroup(&g1, &chain).map_err(|e| e.to_string())?;
            let i2 = g2.order().unwrap() / t2.order().unwrap();
            let i1 = g1.order().unwrap() / t1.order().unwrap();
            ensure!(
                i2 % i1 == 0 && is_power_of(i2 / i1, ell),
                "l = {ell}: index ratio {i2}/{i1}"
            );
            filtered_checked += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed <= Duration::from_secs(120), "took {elapsed:?}");
    Ok(format!(
        "{cyclic_checked} cyclic subgroups, {filtered_checked} filtered chains ({:.1}s)",
        elapsed.as_secs_f64()
    ))
}

fn random_level_two_pair(g: &mut rand_chacha::ChaCha8Rng) -> (MatrixGroup, TorsionSubgroup) {
    loop {
        let r = ring([2u64, 3][g.gen_range(0..2)], 2);
        let genus = g.gen_range(1..=2);
        let space = SymplecticSpace::standard(genus, r).unwrap();
        let gens: Vec<MatrixMod> = (0..g.gen_range(1..=2))
            .map(|_| {
                let lambda = random_unit(g, r);
                random_similitude(g, &space, lambda)
            })
            .collect();
        match galois_model::close(&space, gens, 100_000) {
            Ok(group) => {
                let hgens: Vec<Vec<u64>> = (0..g.gen_range(1..=2))
                    .map(|_| random_vec(g, r, 2 * genus))
                    .collect();
                return (
                    group,
                    TorsionSubgroup::from_generators(r, 2 * genus, &hgens).unwrap(),
                );
            }
            Err(Error::CapExceeded { .. }) => continue,
            Err(e) => panic!("{e}"),
        }
    }
}

fn criterion_9() -> Outcome {
    let mut g = rng(0xacce_0009);
    for _ in 0..100 {
        let (group, h) = random_level_two_pair(&mut g);
        let order = group.order().unwrap();
        let t = stabilizer(&group, &h).map_err(|e| e.to_string())?;
        let orbit = orbit_size(&group, &h, 100_000).map_err(|e| e.to_string())?;
        ensure!(orbit * t.order().unwrap() == order, "|G| != deg * |stab|");
        ensure!(
            degree_kh(&group, &h).unwrap() == orbit,
            "degree differs from orbit size"
        );
        for m in 0..=2 {
            let smaller = h.slice(m);
            let ts = stabilizer(&group, &smaller).unwrap();
            ensure!(t.is_subgroup_of(&ts).unwrap(), "stabilizers not monotone");
            ensure!(
                orbit % degree_kh(&group, &smaller).unwrap() == 0,
                "degrees not monotone"
            );
        }
        let pc = group.reduce(1, 100_000).unwrap();
        let pb = t.reduce(1, 100_000).unwrap();
        let big = order / t.order().unwrap();
        let small = pc.order().unwrap() / pb.order().unwrap();
        ensure!(
            big % small == 0,
            "[pi(C):pi(B)] = {small} does not divide [C:B] = {big}"
        );
    }
    Ok("100 pairs at level 2: tower, monotonicity, index divisibility".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "Mumford stabilizer exact", criterion_1),
        (2, "strong property failure curve", criterion_2),
        (3, "tensor form fixture", criterion_3),
        (4, "image order oracle", criterion_4),
        (5, "CM and self-product counterexamples", criterion_5),
        (6, "m1 oracle equivalence", criterion_6),
        (7, "pairing laws", criterion_7),
        (8, "power-of-l degree ratios", criterion_8),
        (9, "index divisibility and tower identities", criterion_9),
    ];
    let mut failures = Vec::new();
    for (id, name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {id} PASS: {name} ({detail})"),
            Err(why) => {
                println!("criterion {id} FAIL: {name} ({why})");
                failures.push(id);
            }
        }
    }
    if !failures.is_empty() {
        eprintln!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
