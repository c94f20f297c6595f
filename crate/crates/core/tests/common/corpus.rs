//! Random documents written with formatting noise, paired with their
//! normal form computed directly from the generated structure.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::q;

struct Lat {
    phi: Vec<BigRational>,
    c1: Vec<i64>,
    grading: String,
    modulus: Option<i64>,
}

#[derive(Clone)]
struct Gen {
    name: String,
    degree: i64,
}

struct Entry {
    source: usize,
    target: usize,
    terms: Vec<(Vec<i64>, BigRational)>,
}

fn weight(lat: &Lat, g: &[i64]) -> BigRational {
    g.iter()
        .zip(&lat.phi)
        .map(|(a, p)| p * BigRational::from_integer(BigInt::from(*a)))
        .fold(BigRational::zero(), |x, y| x + y)
}

fn group(g: &[i64]) -> String {
    format!("g({})", g.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
}

fn canonical_literal(lat: &Lat, terms: &[(Vec<i64>, BigRational)]) -> String {
    let mut merged: Vec<(Vec<i64>, BigRational)> = Vec::new();
    for (g, c) in terms {
        match merged.iter_mut().find(|(h, _)| h == g) {
            Some(e) => e.1 = &e.1 + c,
            None => merged.push((g.clone(), c.clone())),
        }
    }
    merged.retain(|(_, c)| !c.is_zero());
    merged.sort_by(|a, b| weight(lat, &a.0).cmp(&weight(lat, &b.0)).then(a.0.cmp(&b.0)));
    if merged.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (g, c)) in merged.iter().enumerate() {
        let sep = match (i, c.is_negative()) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        };
        s.push_str(sep);
        if g.iter().all(|a| *a == 0) {
            let _ = write!(s, "{}", c.abs());
        } else {
            let _ = write!(s, "{}*{}", c.abs(), group(g));
        }
    }
    s
}

fn noisy_rational(r: &mut ChaCha8Rng, c: &BigRational) -> String {
    let k = BigInt::from(r.gen_range(1..=3));
    let (n, d) = (c.numer() * &k, c.denom() * &k);
    if d == BigInt::from(1) && r.gen_bool(0.5) {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

fn noisy_literal(r: &mut ChaCha8Rng, rank: usize, terms: &[(Vec<i64>, BigRational)]) -> String {
    if terms.is_empty() {
        return if r.gen_bool(0.5) { "0".into() } else { format!("0*{}", group(&vec![0; rank])) };
    }
    let mut parts = terms.to_vec();
    parts.shuffle(r);
    let mut s = String::new();
    for (i, (g, c)) in parts.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        let sep = match (i, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => if r.gen_bool(0.5) { " - " } else { "-" },
            (_, false) => if r.gen_bool(0.5) { " + " } else { "+" },
        };
        s.push_str(sep);
        let coeff = noisy_rational(r, &mag);
        if mag == q(1, 1) && r.gen_bool(0.3) {
            s.push_str(&group(g));
        } else if g.iter().all(|a| *a == 0) && r.gen_bool(0.5) {
            s.push_str(&coeff);
        } else {
            let _ = write!(s, "{coeff} * {}", group(g));
        }
    }
    s
}

fn random_terms(r: &mut ChaCha8Rng, rank: usize) -> Vec<(Vec<i64>, BigRational)> {
    let n = r.gen_range(0..=3);
    let mut out: Vec<(Vec<i64>, BigRational)> = Vec::new();
    for _ in 0..n {
        let g: Vec<i64> = (0..rank).map(|_| r.gen_range(-3..=3)).collect();
        let mut c = q(r.gen_range(1..=9), r.gen_range(1..=4));
        if r.gen_bool(0.4) {
            c = -c;
        }
        // Sometimes split a coefficient over two written terms.
        if r.gen_bool(0.2) {
            let part = q(1, 2);
            out.push((g.clone(), &c - &part));
            out.push((g, part));
        } else {
            out.push((g, c));
        }
    }
    out
}

fn reduce(lat: &Lat, d: i64) -> i64 {
    match lat.modulus {
        Some(m) => d.rem_euclid(m),
        None => d,
    }
}

/// Returns `(noisy, normal_form)`.
pub fn document(r: &mut ChaCha8Rng) -> (String, String) {
    let lat = if r.gen_bool(0.5) {
        Lat {
            phi: vec![q(1, 1)],
            c1: vec![0],
            grading: "z".into(),
            modulus: None,
        }
    } else {
        let (grading, modulus) = match r.gen_range(0..3) {
            0 => ("z2".to_string(), Some(2)),
            1 => ("mod 4".to_string(), Some(4)),
            _ => ("z".to_string(), None),
        };
        Lat {
            phi: vec![q(1, 1), q(7, 1000)],
            c1: vec![0, 2],
            grading,
            modulus,
        }
    };
    let rank = lat.phi.len();
    let derived = if rank == 1 { "z" } else { "mod 4" };
    let mut noisy = String::new();
    let mut canon = String::new();

    let _ = writeln!(noisy, "# generated document\n\n[group]   # lattice");
    let _ = writeln!(noisy, "rank={rank}");
    let phi: Vec<String> = lat.phi.iter().map(|p| noisy_rational(r, p)).collect();
    let _ = writeln!(noisy, "  phi =  {}", phi.join(" , "));
    let _ = writeln!(noisy, "c1 = {}", lat.c1.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
    if lat.grading != derived || r.gen_bool(0.5) {
        let _ = writeln!(noisy, "grading = {}", lat.grading);
    }
    let _ = writeln!(canon, "[group]");
    let _ = writeln!(canon, "rank = {rank}");
    let _ = writeln!(
        canon,
        "phi = {}",
        lat.phi.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
    );
    let _ = writeln!(
        canon,
        "c1 = {}",
        lat.c1.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
    );
    let _ = writeln!(canon, "grading = {}", lat.grading);

    let ncomplex = r.gen_range(1..=3);
    let mut complexes: Vec<(String, Vec<Gen>)> = Vec::new();
    for ci in 0..ncomplex {
        let name = format!("c{ci}");
        let n = r.gen_range(0..=5);
        let gens: Vec<Gen> = (0..n)
            .map(|i| Gen {
                name: format!("x{i}{}", if r.gen_bool(0.2) { ".a" } else { "" }),
                degree: reduce(&lat, r.gen_range(-1..=3)),
            })
            .collect();
        // Entries where the degree rule holds.
        let mut entries = Vec::new();
        for s in 0..n {
            for t in 0..n {
                if gens[t].degree == reduce(&lat, gens[s].degree + 1) && r.gen_bool(0.5) {
                    entries.push(Entry {
                        source: s,
                        target: t,
                        terms: random_terms(r, rank),
                    });
                }
            }
        }
        let _ = writeln!(noisy, "\n[complex {name}]");
        let mut k = 0;
        while k < n {
            let d = gens[k].degree;
            let shown = if lat.modulus.is_some() && r.gen_bool(0.3) {
                d + lat.modulus.unwrap()
            } else {
                d
            };
            let _ = writeln!(noisy, "[module {shown}]");
            // Emit a random-length prefix of the run of this degree.
            let mut j = k;
            while j < n && gens[j].degree == d {
                let _ = writeln!(noisy, "  {}   ", gens[j].name);
                j += 1;
                if r.gen_bool(0.3) {
                    break;
                }
            }
            k = j;
        }
        let _ = writeln!(noisy, "[differential]");
        let mut order: Vec<usize> = (0..entries.len()).collect();
        order.shuffle(r);
        for &e in &order {
            let en = &entries[e];
            let _ = writeln!(
                noisy,
                "{} ->{}:{}",
                gens[en.source].name,
                gens[en.target].name,
                noisy_literal(r, rank, &en.terms)
            );
        }

        let _ = writeln!(canon, "\n[complex {name}]");
        let mut current = None;
        for g in &gens {
            if current != Some(g.degree) {
                let _ = writeln!(canon, "[module {}]", g.degree);
                current = Some(g.degree);
            }
            let _ = writeln!(canon, "{}", g.name);
        }
        let _ = writeln!(canon, "[differential]");
        entries.sort_by_key(|e| (e.source, e.target));
        for e in &entries {
            let lit = canonical_literal(&lat, &e.terms);
            if lit != "0" {
                let _ = writeln!(canon, "{} -> {}: {lit}", gens[e.source].name, gens[e.target].name);
            }
        }
        complexes.push((name, gens));
    }

    let nmaps = r.gen_range(0..=2);
    for mi in 0..nmaps {
        let (sname, sg) = complexes.choose(r).unwrap().clone();
        let (tname, tg) = complexes.choose(r).unwrap().clone();
        let mut entries = Vec::new();
        for (s, a) in sg.iter().enumerate() {
            for (t, b) in tg.iter().enumerate() {
                if a.degree == b.degree && r.gen_bool(0.5) {
                    entries.push(Entry {
                        source: s,
                        target: t,
                        terms: random_terms(r, rank),
                    });
                }
            }
        }
        let _ = writeln!(noisy, "\n[map m{mi}]\ntarget= {tname}\nsource =  {sname}");
        let mut order: Vec<usize> = (0..entries.len()).collect();
        order.shuffle(r);
        for &e in &order {
            let en = &entries[e];
            let _ = writeln!(noisy, "{} -> {} : {}", sg[en.source].name, tg[en.target].name, noisy_literal(r, rank, &en.terms));
        }
        let _ = writeln!(canon, "\n[map m{mi}]\nsource = {sname}\ntarget = {tname}");
        entries.sort_by_key(|e| (e.source, e.target));
        for e in &entries {
            let lit = canonical_literal(&lat, &e.terms);
            if lit != "0" {
                let _ = writeln!(canon, "{} -> {}: {lit}", sg[e.source].name, tg[e.target].name);
            }
        }
    }
    (noisy, canon)
}
