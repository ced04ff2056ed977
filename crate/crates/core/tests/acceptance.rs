//! Acceptance suite. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; exits nonzero if any criterion fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use knotcrypt::codes::{canonical_dt, dt_connected_sum, extract_dt, format_dt};
use knotcrypt::invariants::{jones_with, kauffman_bracket, BracketEngine};
use knotcrypt::protocol::{
    attack_invariant_demo, decrypt_message, derive_key_knots, encrypt_detailed, encrypt_message,
    make_key_package, receive_key_package, rsa_keygen, send_key_package, Codebook, KeyPackage,
};
use knotcrypt::table::KnotTable;
use knotcrypt::{
    close_presentation, connected_sum, jones, mutate, LaurentPolynomial, Parallelism, RotationKind,
};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn dt_of_five_one(t: &KnotTable) -> Outcome {
    let e = t.get("5_1").ok_or("5_1 missing")?;
    let code = extract_dt(&e.pd).map_err(|e| e.to_string())?;
    ensure!(code.entries() == [6, 8, 10, 2, 4], "got {code}");
    Ok(format!("5_1 -> {}", format_dt(&code)))
}

fn composition_matches_codes(t: &KnotTable) -> Outcome {
    let ks = common::small_knots(t, 7);
    let mut pairs = 0;
    for a in &ks {
        for b in &ks {
            let (da, db) = (extract_dt(a).unwrap(), extract_dt(b).unwrap());
            let sum = connected_sum(a, b).map_err(|e| e.to_string())?;
            let got = extract_dt(&sum).map_err(|e| e.to_string())?;
            ensure!(got == dt_connected_sum(&da, &db), "{:?} # {:?}: {got}", a.name(), b.name());
            pairs += 1;
        }
    }
    ensure!(pairs >= 196, "only {pairs} pairs");
    Ok(format!("{pairs} ordered pairs"))
}

fn jones_is_multiplicative(t: &KnotTable) -> Outcome {
    let ks = common::small_knots(t, 7);
    let js: Vec<_> = ks.iter().map(|k| jones(k).unwrap()).collect();
    let mut pairs = 0;
    for (a, ja) in ks.iter().zip(&js) {
        for (b, jb) in ks.iter().zip(&js) {
            let sum = connected_sum(a, b).map_err(|e| e.to_string())?;
            let j = jones(&sum).map_err(|e| e.to_string())?;
            ensure!(j == ja * jb, "{:?} # {:?}", a.name(), b.name());
            pairs += 1;
        }
    }
    Ok(format!("{pairs} ordered pairs"))
}

fn mutants_are_indistinguishable(t: &KnotTable) -> Outcome {
    let kt = t.get("11n42").ok_or("11n42 missing")?;
    let conway = t.get("11n34").ok_or("11n34 missing")?;
    // The full 2^11-state sum, so each evaluation visits exactly 2048 states.
    let engine = BracketEngine::Enumeration(Parallelism::default());
    let jkt = jones_with(&kt.pd, engine).map_err(|e| e.to_string())?;
    let jc = jones_with(&conway.pd, engine).map_err(|e| e.to_string())?;
    ensure!(jkt == jc, "jones differs: {jkt} vs {jc}");
    let (ckt, cc) = (canonical_dt(&kt.pd).unwrap(), canonical_dt(&conway.pd).unwrap());
    ensure!(ckt != cc, "canonical codes agree: {ckt}");
    let mut checked = 0;
    for e in t.entries() {
        let base = jones(&close_presentation(&e.tangle).map_err(|x| x.to_string())?).unwrap();
        for r in RotationKind::ALL {
            let m = mutate(&e.tangle, r).map_err(|x| format!("{} {r}: {x}", e.name))?;
            ensure!(jones(&m).unwrap() == base, "{} rotated by {r}", e.name);
            checked += 1;
        }
    }
    Ok(format!("KT and Conway share {jkt}; {checked} mutations checked"))
}

fn reidemeister_invariance(t: &KnotTable) -> Outcome {
    let ks = common::small_knots(t, 7);
    let mut rng = ChaCha20Rng::seed_from_u64(0x5eed);
    let (mut sequences, mut moves, mut r1s) = (0, 0, 0);
    let plus = LaurentPolynomial::monomial(-1, 3);
    let minus = LaurentPolynomial::monomial(-1, -3);
    for i in 0..120 {
        let start = &ks[i % ks.len()];
        let j0 = jones(start).unwrap();
        let len = rng.gen_range(1..=8);
        let mut prev = kauffman_bracket(start).unwrap();
        for (m, d) in common::random_walk(start, len, 16, &mut rng) {
            let b = kauffman_bracket(&d).map_err(|e| e.to_string())?;
            ensure!(jones(&d).unwrap() == j0, "jones changed after {m} on {:?}", start.name());
            match m {
                knotcrypt::MoveSpec::R1Insert { .. } => {
                    ensure!(b == &prev * &plus || b == &prev * &minus, "R1 {m} scaled wrongly");
                    r1s += 1;
                }
                knotcrypt::MoveSpec::R1Delete { .. } => {
                    ensure!(prev == &b * &plus || prev == &b * &minus, "R1 {m} scaled wrongly");
                    r1s += 1;
                }
                _ => ensure!(b == prev, "bracket changed under {m}"),
            }
            prev = b;
            moves += 1;
        }
        sequences += 1;
    }
    ensure!(sequences >= 100, "only {sequences} sequences");
    Ok(format!("{sequences} sequences, {moves} moves, {r1s} R1 moves"))
}

fn protocol_round_trip(t: &KnotTable) -> Outcome {
    let cb = Codebook::default_for(t).map_err(|e| e.to_string())?;
    let mut total = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let bits = [16, 32, 64, 128, 256][seed as usize % 5];
        let rsa = rsa_keygen(bits, &mut rng).map_err(|e| e.to_string())?;
        let n = rng.gen_range(1..=16);
        let pkg = make_key_package(t, n, &mut rng).unwrap();
        let blocks = send_key_package(&pkg, &rsa.public()).map_err(|e| e.to_string())?;
        let got = receive_key_package(&blocks, &rsa).map_err(|e| e.to_string())?;
        ensure!(got.to_bytes() == pkg.to_bytes(), "seed {seed}: package changed in transport");
        let mut msg = vec![0u8; rng.gen_range(0..=256)];
        rng.fill_bytes(&mut msg);
        let sender = derive_key_knots(&got, t).unwrap();
        let receiver = derive_key_knots(&pkg, t).unwrap();
        let c = encrypt_message(&msg, &sender, &cb).map_err(|e| e.to_string())?;
        let back = decrypt_message(&c, &receiver, &cb).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(back == msg, "seed {seed}: wrong plaintext");
        total += msg.len();
    }
    Ok(format!("100 sessions, {total} bytes"))
}

fn wrong_key_fails(t: &KnotTable) -> Outcome {
    let cb = Codebook::default_for(t).unwrap();
    let mut errors = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let right = derive_key_knots(&make_key_package(t, 8, &mut rng).unwrap(), t).unwrap();
        let mut other = ChaCha20Rng::seed_from_u64(seed + 1_000_000);
        let wrong = derive_key_knots(&make_key_package(t, 8, &mut other).unwrap(), t).unwrap();
        let mut msg = vec![0u8; 32];
        rng.fill_bytes(&mut msg);
        let c = encrypt_message(&msg, &right, &cb).unwrap();
        match decrypt_message(&c, &wrong, &cb) {
            Err(_) => errors += 1,
            Ok(p) if p == msg => return Err(format!("seed {seed}: wrong key decrypted correctly")),
            Ok(_) => return Err(format!("seed {seed}: silent wrong plaintext")),
        }
    }
    ensure!(errors == 100, "{errors}/100 errors");
    Ok("100/100 trials rejected".into())
}

fn attack_is_ambiguous(t: &KnotTable) -> Outcome {
    let w = t
        .mutants()
        .iter()
        .find(|w| w.source == "11n42")
        .ok_or("no mutation recorded for 11n42")?;
    let cb = Codebook::default_for(t).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let filler = make_key_package(t, 2, &mut rng).unwrap();
    let mut entries = vec![(w.source.clone(), w.rotation)];
    entries.push(filler.entries()[0].clone());
    entries.push((w.source.clone(), w.rotation));
    entries.push(filler.entries()[1].clone());
    let pkg = KeyPackage::new(1, entries).unwrap();
    let keys = derive_key_knots(&pkg, t).unwrap();
    let mut msg = vec![0u8; 8];
    rng.fill_bytes(&mut msg);
    let (c, granted) = encrypt_detailed(&msg, &keys, &cb).map_err(|e| e.to_string())?;
    let report = attack_invariant_demo(&c, t, &granted).map_err(|e| e.to_string())?;
    let mut affected = 0;
    for r in &report.records {
        if r.record % 2 != 0 {
            continue;
        }
        let cands = r.candidates();
        ensure!(cands.len() >= 2, "record {}: {} survivors", r.record, cands.len());
        ensure!(
            cands.iter().any(|c| c == &w.source) && cands.iter().any(|c| c == &w.target),
            "record {}: survivors {cands:?}",
            r.record
        );
        ensure!(r.is_ambiguous(), "record {} not flagged", r.record);
        affected += 1;
    }
    Ok(format!("{affected} affected records, each with {} and {} surviving", w.source, w.target))
}

/// Largest `len - C * n` over the table for the stated slope.
const SLOPE: usize = 4;
const INTERCEPT: i64 = 0;

fn dt_size_is_linear(t: &KnotTable) -> Outcome {
    let mut worst = i64::MIN;
    let mut ratio: f64 = 0.0;
    for e in t.entries() {
        let len = format_dt(&e.dt).len();
        let n = e.crossing_number;
        worst = worst.max(len as i64 - (SLOPE * n) as i64);
        ratio = ratio.max(len as f64 / n as f64);
        ensure!(len as i64 <= (SLOPE * n) as i64 + INTERCEPT, "{}: {len} bytes for {n} crossings", e.name);
    }
    Ok(format!(
        "len <= {SLOPE}n + {INTERCEPT} over {} knots (tightest slack {}, max bytes per crossing {ratio:.2})",
        t.len(),
        -worst
    ))
}

type Criterion = (&'static str, Duration, fn(&KnotTable) -> Outcome);

fn main() {
    let table = KnotTable::bundled();
    let criteria: [Criterion; 9] = [
        ("DT code of 5_1", Duration::from_millis(1), dt_of_five_one),
        ("code and diagram composition agree", Duration::from_secs(5), composition_matches_codes),
        ("Jones multiplicative under connected sum", Duration::from_secs(60), jones_is_multiplicative),
        ("mutants share the Jones polynomial", Duration::from_secs(10), mutants_are_indistinguishable),
        ("Reidemeister invariance", Duration::from_secs(60), reidemeister_invariance),
        ("protocol round trip", Duration::from_secs(30), protocol_round_trip),
        ("wrong key fails loudly", Duration::from_secs(30), wrong_key_fails),
        ("attack leaves mutants ambiguous", Duration::from_secs(60), attack_is_ambiguous),
        ("DT size linear in crossings", Duration::from_secs(5), dt_size_is_linear),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(|| check(&table)))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > *budget => Err(format!("{detail}; took {elapsed:?}, budget {budget:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("criterion {}: PASS: {name} ({detail}; {elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL: {name} ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
