//! Seeded generators of exact test data together with independently
//! computed expected values.

#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symtorsion::lattice::{GroupElement, Lattice};
use symtorsion::linalg::Matrix;
use symtorsion::series::{Cutoff, NovikovElement};
use symtorsion::torsion::{BasedComplex, BasisChange, BasisChangeClass, ChainMap, Generator, Grading};

pub mod arith;
pub mod corpus;
pub mod props;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn laurent() -> Arc<Lattice> {
    Arc::new(Lattice::laurent())
}

/// Rank-2 lattice whose weights never tie on the small coordinates used here.
pub fn lattice2() -> Arc<Lattice> {
    Arc::new(Lattice::new(vec![q(1, 1), q(7, 1000)], vec![0, 2]).unwrap())
}

pub fn lit(l: &Arc<Lattice>, s: &str) -> NovikovElement {
    NovikovElement::parse(l, s).unwrap()
}

pub fn one(l: &Arc<Lattice>) -> NovikovElement {
    NovikovElement::one(l)
}

pub fn small_rational(r: &mut ChaCha8Rng) -> BigRational {
    let mut n = r.gen_range(1..=5);
    if r.gen_bool(0.5) {
        n = -n;
    }
    q(n, r.gen_range(1..=3))
}

pub fn random_group_element(r: &mut ChaCha8Rng, l: &Lattice, span: i64) -> GroupElement {
    GroupElement::new((0..l.rank()).map(|_| r.gen_range(-span..=span)).collect())
}

pub fn monomial(l: &Arc<Lattice>, c: BigRational, g: GroupElement) -> NovikovElement {
    NovikovElement::monomial(l, c, g).unwrap()
}

/// Exact element with up to `terms` terms on coordinates in [−span, span].
pub fn random_element(r: &mut ChaCha8Rng, l: &Arc<Lattice>, terms: usize, span: i64) -> NovikovElement {
    let n = r.gen_range(0..=terms);
    let t: Vec<_> = (0..n)
        .map(|_| (random_group_element(r, l, span), small_rational(r)))
        .collect();
    let mut acc = NovikovElement::zero(l);
    for (g, c) in t {
        acc = &acc + &monomial(l, c, g);
    }
    acc
}

/// Exact element whose support has strictly positive weight.
pub fn random_positive(r: &mut ChaCha8Rng, l: &Arc<Lattice>, terms: usize, span: i64) -> NovikovElement {
    let mut acc = NovikovElement::zero(l);
    for _ in 0..terms {
        let g = random_group_element(r, l, span);
        let w = l.weight(&g).unwrap();
        if w > BigRational::from_integer(0.into()) {
            acc = &acc + &monomial(l, small_rational(r), g);
        }
    }
    acc
}

/// Certified exact unit `c·g·(1 + p)` with `p` of positive weight.
pub fn random_unit(r: &mut ChaCha8Rng, l: &Arc<Lattice>) -> NovikovElement {
    let lead = monomial(l, small_rational(r), random_group_element(r, l, 2));
    let tail = random_positive(r, l, 3, 2);
    &lead * &(&one(l) + &tail)
}

/// Unit in Λ₀ of the Laurent lattice with leading coefficient ±1.
pub fn random_unit_lead_one(r: &mut ChaCha8Rng, l: &Arc<Lattice>) -> NovikovElement {
    let c = if r.gen_bool(0.5) { q(1, 1) } else { q(-1, 1) };
    let lead = monomial(l, c, random_group_element(r, l, 2));
    let tail = random_positive(r, l, 3, 2);
    &lead * &(&one(l) + &tail)
}

/// A K̄₁ value kept as an exact quotient.
#[derive(Clone, Debug)]
pub struct Expected {
    pub num: NovikovElement,
    pub den: NovikovElement,
}

impl Expected {
    pub fn one(l: &Arc<Lattice>) -> Self {
        Expected {
            num: one(l),
            den: one(l),
        }
    }

    pub fn unit(u: NovikovElement) -> Self {
        let l = u.lattice().clone();
        Expected { num: u, den: one(&l) }
    }

    pub fn times(&self, o: &Expected) -> Expected {
        Expected {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
    }

    pub fn inv(&self) -> Expected {
        Expected {
            num: self.den.clone(),
            den: self.num.clone(),
        }
    }

    pub fn over(&self, o: &Expected) -> Expected {
        self.times(&o.inv())
    }

    pub fn class(&self) -> BasisChangeClass {
        BasisChangeClass::from_quotient(self.num.clone(), self.den.clone()).unwrap()
    }
}

pub fn random_grading(r: &mut ChaCha8Rng) -> Grading {
    match r.gen_range(0..3) {
        0 => Grading::Z2,
        1 => Grading::Cyclic(4),
        _ => Grading::Integer,
    }
}

fn random_degree(r: &mut ChaCha8Rng, g: Grading) -> i64 {
    match g {
        Grading::Cyclic(m) => r.gen_range(0..m as i64),
        Grading::Integer => r.gen_range(-2..=3),
    }
}

/// Standard acyclic model: a direct sum of pairs `∂a_i = u_i·b_i`,
/// generators shuffled. A pair with odd source contributes u, with even
/// source u⁻¹.
pub struct Model {
    pub complex: BasedComplex,
    pub tau: Expected,
}

pub fn acyclic_model_with(
    r: &mut ChaCha8Rng,
    l: &Arc<Lattice>,
    grading: Grading,
    pairs: usize,
    unit: &mut dyn FnMut(&mut ChaCha8Rng) -> NovikovElement,
) -> Model {
    let mut gens = Vec::new();
    let mut entries = Vec::new();
    let mut tau = Expected::one(l);
    for i in 0..pairs {
        let d = random_degree(r, grading);
        let u = unit(r);
        gens.push(Generator::new(format!("a{i}"), d));
        gens.push(Generator::new(format!("b{i}"), grading.successor(d)));
        let e = Expected::unit(u.clone());
        tau = if d.rem_euclid(2) == 1 { tau.times(&e) } else { tau.over(&e) };
        entries.push((format!("a{i}"), format!("b{i}"), u));
    }
    gens.shuffle(r);
    let n = gens.len();
    let mut m = Matrix::zeros(l, n, n);
    let pos = |name: &str, gens: &[Generator]| gens.iter().position(|g| g.name == name).unwrap();
    for (s, t, u) in entries {
        m.set(pos(&t, &gens), pos(&s, &gens), u);
    }
    Model {
        complex: BasedComplex::new(l.clone(), grading, gens, m).unwrap(),
        tau,
    }
}

pub fn acyclic_model(r: &mut ChaCha8Rng, l: &Arc<Lattice>, grading: Grading, pairs: usize) -> Model {
    let l2 = l.clone();
    acyclic_model_with(r, l, grading, pairs, &mut |r| random_unit(r, &l2))
}

/// Exact invertible change of basis preserving degrees, with the expected
/// class `det T|even / det T|odd` accumulated from its factors.
pub struct Change {
    pub change: BasisChange,
    pub class: Expected,
}

pub fn random_change(r: &mut ChaCha8Rng, c: &BasedComplex, steps: usize) -> Change {
    let l = c.lattice().clone();
    let n = c.len();
    let mut t = Matrix::identity(&l, n);
    let mut ti = Matrix::identity(&l, n);
    let mut class = Expected::one(&l);
    let degrees: Vec<i64> = c.generators().iter().map(|g| g.degree).collect();
    for _ in 0..steps {
        let i = r.gen_range(0..n.max(1));
        if n == 0 {
            break;
        }
        let same: Vec<usize> = (0..n).filter(|&j| j != i && degrees[j] == degrees[i]).collect();
        let kind = r.gen_range(0..3);
        let (e, ei, factor) = if kind == 0 || same.is_empty() {
            // Scale column i by ±c·g.
            let g = random_group_element(r, &l, 1);
            let cst = small_rational(r);
            let m = monomial(&l, cst.clone(), g.clone());
            let mi = monomial(&l, cst.recip(), -&g);
            let mut e = Matrix::identity(&l, n);
            let mut ei = Matrix::identity(&l, n);
            e.set(i, i, m.clone());
            ei.set(i, i, mi);
            (e, ei, Some(m))
        } else if kind == 1 {
            // Add x·(basis vector i) to basis vector j.
            let j = *same.choose(r).unwrap();
            let x = random_element(r, &l, 2, 2);
            let mut e = Matrix::identity(&l, n);
            let mut ei = Matrix::identity(&l, n);
            e.set(i, j, x.clone());
            ei.set(i, j, -&x);
            (e, ei, None)
        } else {
            let j = *same.choose(r).unwrap();
            let mut e = Matrix::identity(&l, n);
            e.set(i, i, NovikovElement::zero(&l));
            e.set(j, j, NovikovElement::zero(&l));
            e.set(i, j, one(&l));
            e.set(j, i, one(&l));
            (e.clone(), e, Some(-&one(&l)))
        };
        if let Some(f) = factor {
            let f = Expected::unit(f);
            class = if degrees[i].rem_euclid(2) == 0 {
                class.times(&f)
            } else {
                class.over(&f)
            };
        }
        t = t.mul(&e).unwrap();
        ti = ei.mul(&ti).unwrap();
    }
    Change {
        change: BasisChange::new(t, ti).unwrap(),
        class,
    }
}

/// Random map `source → target` raising degree by `shift`.
pub fn random_graded_map(r: &mut ChaCha8Rng, source: &BasedComplex, target: &BasedComplex, shift: i64) -> Matrix {
    let l = source.lattice();
    let g = source.grading();
    let mut h = Matrix::zeros(l, target.len(), source.len());
    for (s, gs) in source.generators().iter().enumerate() {
        for (t, gt) in target.generators().iter().enumerate() {
            if gt.degree == g.reduce(gs.degree + shift) && r.gen_bool(0.6) {
                h.set(t, s, random_element(r, l, 2, 2));
            }
        }
    }
    h
}

/// Random degree −1 map, a candidate chain homotopy.
pub fn random_homotopy(r: &mut ChaCha8Rng, source: &BasedComplex, target: &BasedComplex) -> Matrix {
    random_graded_map(r, source, target, -1)
}

/// `∂_t H + H ∂_s`, always a chain map.
pub fn null_homotopic(source: &BasedComplex, target: &BasedComplex, h: &Matrix) -> Matrix {
    target
        .differential()
        .mul(h)
        .unwrap()
        .add(&h.mul(source.differential()).unwrap())
        .unwrap()
}

/// A complex `H ⊕ A` with zero differential on the named homology part
/// `h{i}` (degrees given) and an acyclic part A.
pub struct Split {
    pub complex: BasedComplex,
    pub homology: Vec<usize>,
    pub acyclic_tau: Expected,
}

pub fn split_complex(r: &mut ChaCha8Rng, l: &Arc<Lattice>, grading: Grading, hdeg: &[i64], pairs: usize) -> Split {
    let model = acyclic_model(r, l, grading, pairs);
    let mut gens: Vec<Generator> = hdeg
        .iter()
        .enumerate()
        .map(|(i, &d)| Generator::new(format!("h{i}"), d))
        .collect();
    let k = gens.len();
    gens.extend(model.complex.generators().iter().cloned());
    let n = gens.len();
    let mut m = Matrix::zeros(l, n, n);
    for (t, s, e) in model.complex.differential().entries() {
        m.set(k + t, k + s, e.clone());
    }
    Split {
        complex: BasedComplex::new(l.clone(), grading, gens, m).unwrap(),
        homology: (0..k).collect(),
        acyclic_tau: model.tau,
    }
}

/// Quasi-isomorphism `H ⊕ A₁ → H ⊕ A₂` equal to an invertible map `s` on H
/// plus a null-homotopic term. Expected relative torsion
/// `[s|even] − [s|odd] + τ(A₂) − τ(A₁)`.
pub struct Quasi {
    pub map: ChainMap,
    pub tau: Expected,
}

pub fn random_quasi(r: &mut ChaCha8Rng, c1: &Split, c2: &Split) -> Quasi {
    let l = c1.complex.lattice().clone();
    let (a, b) = (&c1.complex, &c2.complex);
    let h = random_homotopy(r, a, b);
    let mut f = null_homotopic(a, b, &h);
    let mut s_class = Expected::one(&l);
    for (&i, &j) in c1.homology.iter().zip(&c2.homology) {
        let u = monomial(&l, small_rational(r), random_group_element(r, &l, 2));
        let prev = f.get(j, i).clone();
        f.set(j, i, &prev + &u);
        let e = Expected::unit(u);
        s_class = if a.generators()[i].degree.rem_euclid(2) == 0 {
            s_class.times(&e)
        } else {
            s_class.over(&e)
        };
    }
    let tau = s_class.times(&c2.acyclic_tau).over(&c1.acyclic_tau);
    Quasi {
        map: ChainMap::new(Arc::new(a.clone()), Arc::new(b.clone()), f).unwrap(),
        tau,
    }
}

pub fn homology_degrees(r: &mut ChaCha8Rng, g: Grading, k: usize) -> Vec<i64> {
    (0..k).map(|_| random_degree(r, g)).collect()
}

pub fn assert_k1(actual: &BasisChangeClass, expected: &Expected, context: &str) {
    assert!(
        actual.agreement(&expected.class()).holds(),
        "{context}: got ({}) / ({}), expected ({}) / ({})",
        actual.numerator(),
        actual.denominator(),
        expected.num,
        expected.den
    );
}

pub fn exact() -> Cutoff {
    Cutoff::Exact
}
