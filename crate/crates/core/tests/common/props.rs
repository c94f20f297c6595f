//! One randomized case per call for each torsion identity. Each function
//! panics with a message on failure.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use symtorsion::linalg::{determinant, Matrix};
use symtorsion::series::NovikovElement;
use symtorsion::torsion::{
    basis_change_class, homotopy_equivalent, BasedComplex, BasisChange, ChainMap, GradedBasis, Generator,
    TorsionOptions,
};

use super::*;

fn opts() -> TorsionOptions {
    TorsionOptions::default()
}

/// Random exact invertible square matrix with its determinant.
fn invertible(r: &mut ChaCha8Rng, l: &Arc<Lattice>, n: usize) -> (Matrix, NovikovElement) {
    let gens: Vec<Generator> = (0..n).map(|i| Generator::new(format!("e{i}"), 0)).collect();
    let c = BasedComplex::without_differential(l.clone(), Grading::Z2, gens).unwrap();
    let ch = random_change(r, &c, 3 * n + 1);
    (ch.change.forward().clone(), ch.class.num.clone())
}

/// `[b/d] = [b/c] + [c/d]`.
pub fn cocycle(seed: u64) {
    let mut r = rng(seed);
    let l = if r.gen_bool(0.5) { laurent() } else { lattice2() };
    let (ne, no) = (r.gen_range(1..=3), r.gen_range(1..=3));
    let basis = |r: &mut ChaCha8Rng| -> (GradedBasis, Expected) {
        let (e, de) = invertible(r, &l, ne);
        let (o, dodd) = invertible(r, &l, no);
        (GradedBasis { even: e, odd: o }, Expected::unit(de).over(&Expected::unit(dodd)))
    };
    let (b, db) = basis(&mut r);
    let (c, dc) = basis(&mut r);
    let (d, dd) = basis(&mut r);
    let w = q(20, 1);
    let bd = basis_change_class(&b, &d, &w).unwrap();
    let bc = basis_change_class(&b, &c, &w).unwrap();
    let cd = basis_change_class(&c, &d, &w).unwrap();
    assert!(bd.agreement(&bc.combine(&cd)).holds(), "seed {seed}: cocycle");
    assert_k1(&bd, &db.over(&dd), &format!("seed {seed}: [b/d] against construction"));
    assert_k1(&bc, &db.over(&dc), &format!("seed {seed}: [b/c] against construction"));
}

/// Block upper-triangular transitions split.
pub fn exact_sequence_bases(seed: u64) {
    let mut r = rng(seed);
    let l = laurent();
    let (n1, n3) = (r.gen_range(1..=3), r.gen_range(1..=3));
    let (a, da) = invertible(&mut r, &l, n1);
    let (c, dc) = invertible(&mut r, &l, n3);
    let n = n1 + n3;
    let mut m = Matrix::zeros(&l, n, n);
    for (i, j, e) in a.entries() {
        m.set(i, j, e.clone());
    }
    for (i, j, e) in c.entries() {
        m.set(n1 + i, n1 + j, e.clone());
    }
    for i in 0..n1 {
        for j in 0..n3 {
            m.set(i, n1 + j, random_element(&mut r, &l, 2, 2));
        }
    }
    let w = q(20, 1);
    let whole = GradedBasis {
        even: m,
        odd: Matrix::identity(&l, 1),
    };
    let reference = GradedBasis {
        even: Matrix::identity(&l, n),
        odd: Matrix::identity(&l, 1),
    };
    let got = basis_change_class(&whole, &reference, &w).unwrap();
    assert_k1(&got, &Expected::unit(&da * &dc), &format!("seed {seed}: block triangular"));
    let (d, _) = determinant(&a, &w).unwrap();
    assert!(d.agreement(&da).unwrap().holds() || d.agreement(&-&da).unwrap().holds());
}

/// `τ(C, T c) = τ(C, c) − [T c / c]`.
pub fn base_change(seed: u64) {
    let mut r = rng(seed);
    let l = if r.gen_bool(0.5) { laurent() } else { lattice2() };
    let g = random_grading(&mut r);
    let pairs = r.gen_range(1..=3);
    let model = acyclic_model(&mut r, &l, g, pairs);
    let ch = random_change(&mut r, &model.complex, 6);
    let changed = model.complex.change_basis(&ch.change).unwrap();
    let t0 = model.complex.torsion(&opts()).unwrap().k1;
    let t1 = changed.torsion(&opts()).unwrap().k1;
    assert_k1(&t0, &model.tau, &format!("seed {seed}: model torsion"));
    assert_k1(&t1, &model.tau.over(&ch.class), &format!("seed {seed}: changed torsion"));
    let computed = model.complex.basis_change_class(&ch.change, &q(20, 1)).unwrap();
    assert_k1(&computed, &ch.class, &format!("seed {seed}: transition class"));
}

/// For `0 → C' → C → C'' → 0` built block-wise with an upper-right
/// coupling, `τ(C) = τ(C') + τ(C'')`.
pub fn short_exact_additivity(seed: u64) {
    let mut r = rng(seed);
    let l = laurent();
    let g = random_grading(&mut r);
    let n_sub = r.gen_range(1..=2);
    let sub = acyclic_model(&mut r, &l, g, n_sub);
    let n_quo = r.gen_range(1..=2);
    let quo = acyclic_model(&mut r, &l, g, n_quo);
    let sub = {
        let ch = random_change(&mut r, &sub.complex, 4);
        Model {
            complex: sub.complex.change_basis(&ch.change).unwrap(),
            tau: sub.tau.over(&ch.class),
        }
    };
    let (a, b) = (&sub.complex, &quo.complex);
    // ∂ = [[∂', X], [0, ∂'']] with X = ∂'K − K∂'' for a degree 0 map K
    // (quotient → sub); then ∂² = 0.
    let k = random_graded_map(&mut r, b, a, 0);
    let x = a.differential().mul(&k).unwrap().sub(&k.mul(b.differential()).unwrap()).unwrap();
    let (na, nb) = (a.len(), b.len());
    let mut gens: Vec<Generator> = a
        .generators()
        .iter()
        .map(|g| Generator::new(format!("s.{}", g.name), g.degree))
        .collect();
    gens.extend(b.generators().iter().map(|g| Generator::new(format!("q.{}", g.name), g.degree)));
    let mut d = Matrix::zeros(&l, na + nb, na + nb);
    for (i, j, e) in a.differential().entries() {
        d.set(i, j, e.clone());
    }
    for (i, j, e) in b.differential().entries() {
        d.set(na + i, na + j, e.clone());
    }
    for (i, j, e) in x.entries() {
        d.set(i, na + j, e.clone());
    }
    let c = BasedComplex::new(l.clone(), g, gens, d).unwrap();
    let t = c.torsion(&opts()).unwrap().k1;
    assert_k1(&t, &sub.tau.times(&quo.tau), &format!("seed {seed}: additivity"));
}

fn split_pair(r: &mut ChaCha8Rng) -> (Split, Split) {
    let l = if r.gen_bool(0.5) { laurent() } else { lattice2() };
    let g = random_grading(r);
    let k = r.gen_range(0..=2);
    let hdeg = homology_degrees(r, g, k);
    let p1 = r.gen_range(0..=2);
    let p2 = r.gen_range(0..=2);
    (split_complex(r, &l, g, &hdeg, p1), split_complex(r, &l, g, &hdeg, p2))
}

/// `τ(f, c̃₁, c̃₂) − τ(f, c₁, c₂) = [c̃₁/c₁] − [c̃₂/c₂]`.
pub fn relative_base_change(seed: u64) {
    let mut r = rng(seed);
    let (s1, s2) = split_pair(&mut r);
    let qi = random_quasi(&mut r, &s1, &s2);
    let t = qi.map.relative_torsion_k1(&opts()).unwrap();
    assert_k1(&t, &qi.tau, &format!("seed {seed}: relative torsion"));
    let c1 = random_change(&mut r, &s1.complex, 5);
    let c2 = random_change(&mut r, &s2.complex, 5);
    let moved = qi.map.change_bases(&c1.change, &c2.change).unwrap();
    moved.validate().unwrap();
    let tm = moved.relative_torsion_k1(&opts()).unwrap();
    assert_k1(&tm, &qi.tau.times(&c1.class).over(&c2.class), &format!("seed {seed}: base dependence"));
}

/// Chain-homotopic maps have equal relative torsion.
pub fn homotopy_invariance(seed: u64) {
    let mut r = rng(seed);
    let (s1, s2) = split_pair(&mut r);
    let qi = random_quasi(&mut r, &s1, &s2);
    let h = random_homotopy(&mut r, &s1.complex, &s2.complex);
    let g_matrix = qi
        .map
        .matrix()
        .add(&null_homotopic(&s1.complex, &s2.complex, &h))
        .unwrap();
    let g = ChainMap::new(qi.map.source().clone(), qi.map.target().clone(), g_matrix).unwrap();
    assert!(homotopy_equivalent(&g, &qi.map, &h).unwrap(), "seed {seed}: homotopy identity");
    let tf = qi.map.relative_torsion_k1(&opts()).unwrap();
    let tg = g.relative_torsion_k1(&opts()).unwrap();
    assert!(tf.agreement(&tg).holds(), "seed {seed}: homotopic maps differ");
}

/// `τ(g ∘ f) = τ(f) + τ(g)`.
pub fn composition(seed: u64) {
    let mut r = rng(seed);
    let l = if r.gen_bool(0.5) { laurent() } else { lattice2() };
    let g = random_grading(&mut r);
    let k = r.gen_range(0..=2);
    let hdeg = homology_degrees(&mut r, g, k);
    let s: Vec<Split> = (0..3)
        .map(|_| {
            let p = r.gen_range(0..=2);
            split_complex(&mut r, &l, g, &hdeg, p)
        })
        .collect();
    let f = random_quasi(&mut r, &s[0], &s[1]);
    let h = random_quasi(&mut r, &s[1], &s[2]);
    let hf = f.map.then(&h.map).unwrap();
    hf.validate().unwrap();
    let t = hf.relative_torsion_k1(&opts()).unwrap();
    let tf = f.map.relative_torsion_k1(&opts()).unwrap();
    let th = h.map.relative_torsion_k1(&opts()).unwrap();
    assert!(t.agreement(&tf.combine(&th)).holds(), "seed {seed}: composition");
    assert_k1(&t, &f.tau.times(&h.tau), &format!("seed {seed}: composition against construction"));
}

/// For acyclic complexes `τ(f) = τ(C₂) − τ(C₁)`, whatever f is.
pub fn acyclic_difference(seed: u64) {
    let mut r = rng(seed);
    let l = if r.gen_bool(0.5) { laurent() } else { lattice2() };
    let g = random_grading(&mut r);
    let n_a = r.gen_range(1..=3);
    let a = acyclic_model(&mut r, &l, g, n_a);
    let n_b = r.gen_range(1..=3);
    let b = acyclic_model(&mut r, &l, g, n_b);
    let h = random_homotopy(&mut r, &a.complex, &b.complex);
    let f = ChainMap::new(
        Arc::new(a.complex.clone()),
        Arc::new(b.complex.clone()),
        null_homotopic(&a.complex, &b.complex, &h),
    )
    .unwrap();
    let t = f.relative_torsion_k1(&opts()).unwrap();
    let ta = a.complex.torsion(&opts()).unwrap().k1;
    let tb = b.complex.torsion(&opts()).unwrap().k1;
    assert!(t.agreement(&tb.difference(&ta)).holds(), "seed {seed}: acyclic difference");
    assert_k1(&t, &b.tau.over(&a.tau), &format!("seed {seed}: against construction"));
}

/// Torsion does not depend on the order in which pivot columns are sought.
pub fn pivot_independence(seed: u64) {
    let mut r = rng(seed);
    let l = if r.gen_bool(0.5) { laurent() } else { lattice2() };
    let g = random_grading(&mut r);
    let n_model = r.gen_range(1..=3);
    let model = acyclic_model(&mut r, &l, g, n_model);
    let ch = random_change(&mut r, &model.complex, 6);
    let c = model.complex.change_basis(&ch.change).unwrap();
    let (ne, no) = c.euler_parity();
    let base = c.torsion(&opts()).unwrap();
    for _ in 0..3 {
        let mut eo: Vec<usize> = (0..ne).collect();
        let mut oo: Vec<usize> = (0..no).collect();
        eo.shuffle(&mut r);
        oo.shuffle(&mut r);
        let o = TorsionOptions {
            even_order: Some(eo),
            odd_order: Some(oo),
            ..opts()
        };
        let t = c.torsion(&o).unwrap();
        assert!(t.k1.agreement(&base.k1).holds(), "seed {seed}: pivot order changed torsion");
    }
}

/// Relabeling every lift by a group element fixes the Whitehead class.
pub fn relabel_invariance(seed: u64) {
    let mut r = rng(seed);
    let l = if r.gen_bool(0.5) { laurent() } else { lattice2() };
    let g = random_grading(&mut r);
    let n_model = r.gen_range(1..=3);
    let model = acyclic_model(&mut r, &l, g, n_model);
    let shifts: Vec<_> = (0..model.complex.len())
        .map(|_| random_group_element(&mut r, &l, 3))
        .collect();
    let change = BasisChange::relabel(&l, &shifts).unwrap();
    let moved = model.complex.change_basis(&change).unwrap();
    let a = model.complex.milnor_torsion(&opts()).unwrap();
    let b = moved.milnor_torsion(&opts()).unwrap();
    assert!(a.same_class(&b), "seed {seed}: relabeling changed the class");
}

/// Complexes over Λ₀ whose units have leading coefficient ±1 have torsion
/// with leading coefficient 1.
pub fn leading_term_one(seed: u64) {
    let mut r = rng(seed);
    let l = laurent();
    let g = random_grading(&mut r);
    let l2 = l.clone();
    let n_model = r.gen_range(1..=3);
    let model = acyclic_model_with(&mut r, &l, g, n_model, &mut |r| random_unit_lead_one(r, &l2));
    let mut c = model.complex;
    for _ in 0..2 {
        // Elementary operations with Λ₀ entries keep leading coefficients.
        let n = c.len();
        let mut t = Matrix::identity(&l, n);
        let mut ti = Matrix::identity(&l, n);
        let i = r.gen_range(0..n);
        if let Some(j) = (0..n).find(|&j| j != i && c.generators()[j].degree == c.generators()[i].degree) {
            let x = random_element(&mut r, &l, 2, 2);
            t.set(i, j, x.clone());
            ti.set(i, j, -&x);
        }
        c = c.change_basis(&BasisChange::new(t, ti).unwrap()).unwrap();
    }
    let class = c.milnor_torsion(&opts()).unwrap();
    assert!(class.in_lambda0());
    assert_eq!(class.leading_coefficient(), q(1, 1), "seed {seed}");
}

/// Generated acyclic complexes have as many even as odd generators.
pub fn acyclic_parity(seed: u64) {
    let mut r = rng(seed);
    let l = if r.gen_bool(0.5) { laurent() } else { lattice2() };
    let g = random_grading(&mut r);
    let n_model = r.gen_range(0..=4);
    let model = acyclic_model(&mut r, &l, g, n_model);
    let ch = random_change(&mut r, &model.complex, 8);
    let c = model.complex.change_basis(&ch.change).unwrap();
    let ranks = c.homology_ranks(&q(20, 1)).unwrap();
    assert!(ranks.is_acyclic(), "seed {seed}: model not acyclic");
    let (e, o) = c.euler_parity();
    assert_eq!(e, o, "seed {seed}");
}
