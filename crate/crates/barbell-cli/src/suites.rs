//! The verify-paper suites: each replays a batch of reference results and
//! returns a one-line summary, or the first failing fixture.

use barbell::freeword::{parse_word, ThetaSpec};
use barbell::groupalg::{kill_t, kill_u, rat, MonomialM1, PolyM1};
use barbell::hexagon::{
    annihilation_audit, check_zero_m1, hexagon_m1, hexagon_m2, slice_functional_m1,
    slot_words_up_to, verify_witness_m1, Functional, QuotientConfig,
};
use barbell::independence::{
    family_theta, independent_m1, independent_m2, FamilyPattern, IndependenceConfig,
    IndependenceVerdict,
};
use barbell::oracle;
use barbell::w3::{factorize, w3_m1, w3_m2, Convention, W3Value};
use barbell::Gen;

pub fn suite_names() -> Vec<&'static str> {
    vec![
        "hexagon-audit",
        "antisym",
        "route-equivalence",
        "delta-prime-zero",
        "slice-values",
        "factorization-example",
        "m2-example",
        "independence",
    ]
}

pub fn run_suite(name: &str) -> Result<String, String> {
    match name {
        "hexagon-audit" => hexagon_audit(),
        "antisym" => antisym(),
        "route-equivalence" => route_equivalence(),
        "delta-prime-zero" => delta_prime_zero(),
        "slice-values" => slice_values(),
        "factorization-example" => factorization_example(),
        "m2-example" => m2_example(),
        "independence" => independence(),
        _ => Err(format!("unknown suite {name}")),
    }
}

fn theta(k: u32, i: u32, j: u32) -> barbell::BarbellWord {
    ThetaSpec::unit(k, i, j)
        .expect("valid theta indices")
        .to_word()
}

fn w3m1(w: &barbell::BarbellWord) -> PolyM1 {
    w3_m1(w, Convention::MainFormula).expect("theta words classify")
}

fn certified_zero(p: &PolyM1, what: &str) -> Result<(), String> {
    match check_zero_m1(p, &QuotientConfig::default()) {
        Ok(v) if v.is_zero() => {
            if let barbell::hexagon::Verdict::Zero { witness, .. } = &v {
                if !verify_witness_m1(p, witness) {
                    return Err(format!("{what}: witness failed re-evaluation"));
                }
            }
            Ok(())
        }
        Ok(_) => Err(format!("{what}: not certified Zero")),
        Err(e) => Err(format!("{what}: {e}")),
    }
}

fn hexagon_audit() -> Result<String, String> {
    let mut functionals = 0;
    for c in -20..=20i64 {
        for a in -10..=10i64 {
            if 2 * a == c {
                continue;
            }
            let report = annihilation_audit(&Functional::SliceM1 { c, a }, 20);
            if !report.passed() {
                return Err(format!(
                    "slice phi_({c},{a}) hit {:?}",
                    report.failures.first()
                ));
            }
            functionals += 1;
        }
    }
    let words = slot_words_up_to(3);
    for nu in &words {
        for mu in &words {
            let g = hexagon_m2(nu, mu);
            let (a, b) = (nu.exponent_sum(Gen::T), mu.exponent_sum(Gen::T));
            if kill_u(&g) != hexagon_m1(a - b, -b) {
                return Err(format!("kill_u(hexagon_m2({nu}, {mu})) is not a generator"));
            }
            let (a, b) = (nu.exponent_sum(Gen::U), mu.exponent_sum(Gen::U));
            if kill_t(&g) != hexagon_m1(a - b, -b) {
                return Err(format!("kill_t(hexagon_m2({nu}, {mu})) is not a generator"));
            }
        }
    }
    Ok(format!(
        "{functionals} slice functionals annihilate all generators |alpha|,|beta| <= 20; kill_u/kill_t map length<=3 generators onto generators"
    ))
}

fn antisym() -> Result<String, String> {
    let mut checked = 0;
    for k in 2..=9u32 {
        for i in 1..k {
            for j in 1..k {
                let s = w3m1(&theta(k, i, j)).add(&w3m1(&theta(k, j, i)));
                certified_zero(&s, &format!("antisym theta_{k}(e_{i},e_{j})"))?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "w3(theta_k(e_i,e_j)) + w3(theta_k(e_j,e_i)) certified Zero for {checked} pairs, k <= 9"
    ))
}

fn route_equivalence() -> Result<String, String> {
    let mut checked = 0;
    for k in 3..=9u32 {
        for i in 1..k as i64 {
            for j in 1..k as i64 {
                let diff =
                    w3m1(&theta(k, i as u32, j as u32)).sub(&oracle::w3_theta_via_dg(k, i, j));
                certified_zero(&diff, &format!("route difference at (k,i,j)=({k},{i},{j})"))?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "T-route vs D/G-route difference certified Zero for {checked} cases, k <= 9, both regimes"
    ))
}

fn delta_prime_zero() -> Result<String, String> {
    for k in 3..=12u32 {
        let p = w3m1(&theta(k, k - 2, k - 2));
        certified_zero(&p, &format!("w3(delta'_{k})"))?;
    }
    Ok("w3(delta'_k) certified Zero with explicit witness, k = 3..12".into())
}

fn slice_values() -> Result<String, String> {
    for k in 6..=15i64 {
        let p = w3m1(&theta(k as u32, k as u32 - 1, k as u32 - 3));
        let v = slice_functional_m1(k - 1, 2, &p).expect("nondegenerate");
        if v != rat(-(k - 1)) {
            return Err(format!(
                "phi_({},2)(theta_{k}(e_{},e_{})) = {v}, expected {}",
                k - 1,
                k - 1,
                k - 3,
                -(k - 1)
            ));
        }
    }
    for k in 4..=15i64 {
        let p = w3m1(&theta(k as u32, k as u32 - 1, k as u32 - 2));
        let v = slice_functional_m1(k - 1, 1, &p).expect("nondegenerate");
        if v != rat(-(k - 1)) {
            return Err(format!(
                "phi_({},1)(delta_{k}) = {v}, expected {}",
                k - 1,
                -(k - 1)
            ));
        }
    }
    Ok(
        "phi_(k-1,2) = -(k-1) for k=6..15 and phi_(k-1,1)(delta_k) = -(k-1) for k=4..15, exact"
            .into(),
    )
}

fn factorization_example() -> Result<String, String> {
    let w = parse_word("t^-1 R B^3 R^-3 t^-6 R B^2", 1).map_err(|e| e.to_string())?;
    let subs = factorize(&w);
    if subs.len() != 6 {
        return Err(format!("expected 6 sub-barbells, got {}", subs.len()));
    }
    let mut magnitudes: Vec<i64> = subs.iter().map(|s| s.coefficient.abs()).collect();
    magnitudes.sort_unstable();
    if magnitudes != vec![2, 2, 3, 3, 6, 9] {
        return Err(format!(
            "coefficient multiset {magnitudes:?}, expected [2,2,3,3,6,9]"
        ));
    }
    Ok(
        "the example word factors into 6 sub-barbells with coefficient multiset {3,2,9,6,3,2}"
            .into(),
    )
}

fn m2_example() -> Result<String, String> {
    for k in 1..=5i64 {
        let w = parse_word(&format!("t B t R u^{k}"), 2).map_err(|e| e.to_string())?;
        let p = w3_m2(&w, Convention::WordForm).map_err(|e| e.to_string())?;
        let reference = oracle::m2_example_reference(k);
        if p != reference {
            return Err(format!("w3(t B t R u^{k}) differs from the stored reference"));
        }
        let mut expected = PolyM1::zero();
        expected.add_term(MonomialM1::new(0, -k), rat(8));
        expected.add_term(MonomialM1::new(-k, 0), rat(-8));
        if kill_t(&p) != expected {
            return Err(format!("kill_t(w3(t B t R u^{k})) != 8(u3^-{k} - u1^-{k})"));
        }
    }
    Ok("w3(t B t R u^k) matches the stored reference termwise and kill_t = 8(u3^-k - u1^-k), k = 1..5".into())
}

fn independence() -> Result<String, String> {
    let mut family = Vec::new();
    for pattern in [
        FamilyPattern::Delta,
        FamilyPattern::ThetaOffsets { a: 1, b: 3 },
    ] {
        for member in family_theta(&pattern, 6, 12).map_err(|e| e.to_string())? {
            match member.value {
                W3Value::M1(p) => family.push(p),
                _ => unreachable!(),
            }
        }
    }
    match independent_m1(&family, &IndependenceConfig::default()) {
        IndependenceVerdict::Independent(cert) if cert.rank == 14 => {}
        other => {
            return Err(format!(
                "14-member family: expected Independent rank 14, got {other:?}"
            ))
        }
    }
    let mut m2_family = Vec::new();
    for member in family_theta(&FamilyPattern::M2PowerU, 1, 5).map_err(|e| e.to_string())? {
        match member.value {
            W3Value::M2(p) => m2_family.push(p),
            _ => unreachable!(),
        }
    }
    match independent_m2(&m2_family, &IndependenceConfig::default()) {
        IndependenceVerdict::Independent(cert) if cert.rank == 5 => {}
        other => {
            return Err(format!(
                "m2 family: expected Independent rank 5, got {other:?}"
            ))
        }
    }
    Ok("the 14-member {delta_k, theta_k(e_(k-1),e_(k-3))} family and the 5-member m=2 family certified Independent".into())
}
