//! Dg associative, commutative and Lie algebras given by structure constants.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{check_map_degree, cohomology_with_contraction, CochainComplex, Contraction, GradedSpace};
use crate::linalg::{LinMap, Vector};
use crate::scalar::{sign, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Species {
    Ass,
    Com,
    Lie,
}

impl Species {
    pub fn koszul_dual(self) -> Species {
        match self {
            Species::Ass => Species::Ass,
            Species::Com => Species::Lie,
            Species::Lie => Species::Com,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Species::Ass => "ass",
            Species::Com => "com",
            Species::Lie => "lie",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Species> {
        match s {
            "ass" => Some(Species::Ass),
            "com" => Some(Species::Com),
            "lie" => Some(Species::Lie),
            _ => None,
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A finite-dimensional dg algebra. For Lie algebras `product` holds the bracket.
///
/// The product table is complete: (anti)symmetric partners and unit products are
/// filled in at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebra {
    pub species: Species,
    pub name: String,
    pub space: GradedSpace,
    pub d: LinMap,
    product: BTreeMap<(usize, usize), Vector>,
    pub unit: Option<usize>,
}

impl DgAlgebra {
    /// Builds an algebra from declared structure constants.
    ///
    /// For `Com`/`Lie`, a declared `a*b` implies `b*a`; declaring both with
    /// inconsistent values is an input error. Declared unit products must agree
    /// with the unit law.
    pub fn new(
        species: Species,
        name: impl Into<String>,
        space: GradedSpace,
        d: LinMap,
        declared: BTreeMap<(usize, usize), Vector>,
        unit: Option<usize>,
    ) -> Result<Self> {
        let n = space.dim();
        if d.rows != n || d.ncols() != n {
            return Err(Error::input("differential has the wrong size"));
        }
        check_map_degree(&d, &space, &space, 1)?;
        if unit.is_some() && species == Species::Lie {
            return Err(Error::input("Lie algebras carry no unit"));
        }
        let mut product: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
        let mut set = |key: (usize, usize), v: Vector, what: &str| -> Result<()> {
            match product.get(&key) {
                Some(old) if *old != v => Err(Error::input(format!(
                    "conflicting values for {} {what} {}",
                    space.name(key.0),
                    space.name(key.1)
                ))),
                _ => {
                    product.insert(key, v);
                    Ok(())
                }
            }
        };
        for ((a, b), v) in &declared {
            if *a >= n || *b >= n || v.max_index().is_some_and(|m| m >= n) {
                return Err(Error::input("structure constant refers to an unknown basis element"));
            }
            let (da, db) = (space.degree(*a), space.degree(*b));
            for i in v.support() {
                if space.degree(i) != da + db {
                    return Err(Error::input(format!(
                        "product {} {} has a term of the wrong degree",
                        space.name(*a),
                        space.name(*b)
                    )));
                }
            }
            set((*a, *b), v.clone(), "*")?;
            let s = sign((da * db) as i64);
            match species {
                Species::Com => set((*b, *a), v.scaled(&s), "*")?,
                Species::Lie => set((*b, *a), v.scaled(&-s), "bracket")?,
                Species::Ass => {}
            }
        }
        if let Some(u) = unit {
            if u >= n {
                return Err(Error::input("unit refers to an unknown basis element"));
            }
            for x in 0..n {
                set((u, x), Vector::unit(x), "*")?;
                set((x, u), Vector::unit(x), "*")?;
            }
        }
        product.retain(|_, v| !v.is_zero());
        Ok(DgAlgebra { species, name: name.into(), space, d, product, unit })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.space.degree(i)
    }

    /// Product (or bracket) of two basis elements.
    pub fn mul(&self, a: usize, b: usize) -> Vector {
        self.product.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn mul_ref(&self, a: usize, b: usize) -> Option<&Vector> {
        self.product.get(&(a, b))
    }

    pub fn mul_vec(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                if let Some(v) = self.product.get(&(i, j)) {
                    out.add_scaled(v, &(x * y));
                }
            }
        }
        out
    }

    /// Nonzero structure constants in basis order.
    pub fn products(&self) -> impl Iterator<Item = (&(usize, usize), &Vector)> {
        self.product.iter()
    }

    pub fn has_zero_differential(&self) -> bool {
        self.d.is_zero()
    }

    pub fn complex(&self) -> CochainComplex {
        CochainComplex { space: self.space.clone(), d: self.d.clone() }
    }

    /// The same algebra with its basis reordered: new basis element `i` is old `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> DgAlgebra {
        let n = self.dim();
        let mut pos = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let space = GradedSpace::new(
            order.iter().map(|&o| (self.space.name(o).to_string(), self.degree(o))).collect(),
        )
        .unwrap();
        let cols = order.iter().map(|&o| self.d.cols[o].remap(|i| Some(pos[i]))).collect();
        let d = LinMap::from_cols(n, cols);
        let product = self
            .product
            .iter()
            .map(|((a, b), v)| ((pos[*a], pos[*b]), v.remap(|i| Some(pos[i]))))
            .collect();
        DgAlgebra {
            species: self.species,
            name: self.name.clone(),
            space,
            d,
            product,
            unit: self.unit.map(|u| pos[u]),
        }
    }
}

/// First violated identity found by [`check_axioms`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: String,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub species: Species,
    pub pass: bool,
    pub violation: Option<Violation>,
}

fn violation(alg: &DgAlgebra, identity: &str, w: &[usize]) -> AxiomReport {
    AxiomReport {
        species: alg.species,
        pass: false,
        violation: Some(Violation {
            identity: identity.to_string(),
            witnesses: w.iter().map(|&i| alg.space.name(i).to_string()).collect(),
        }),
    }
}

/// Exhaustive check of `d² = 0`, the Leibniz rule, the species law and the unit.
pub fn check_axioms(alg: &DgAlgebra) -> AxiomReport {
    let n = alg.dim();
    let deg = |i: usize| alg.degree(i) as i64;
    for x in 0..n {
        if !alg.d.apply(&alg.d.cols[x]).is_zero() {
            return violation(alg, "d∘d = 0", &[x]);
        }
    }
    if let Some(u) = alg.unit {
        if alg.degree(u) != 0 || !alg.d.cols[u].is_zero() {
            return violation(alg, "unit has degree 0 and du = 0", &[u]);
        }
    }
    for a in 0..n {
        for b in 0..n {
            // d(ab) = d(a)b + (-1)^{|a|} a d(b)
            let lhs = alg.d.apply(&alg.mul(a, b));
            let mut rhs = alg.mul_vec(&alg.d.cols[a], &Vector::unit(b));
            rhs.add_scaled(&alg.mul_vec(&Vector::unit(a), &alg.d.cols[b]), &sign(deg(a)));
            if lhs != rhs {
                return violation(alg, "Leibniz rule", &[a, b]);
            }
            let ab = alg.mul(a, b);
            let ba = alg.mul(b, a);
            let s = sign(deg(a) * deg(b));
            match alg.species {
                Species::Com if ab != ba.scaled(&s) => {
                    return violation(alg, "graded commutativity", &[a, b]);
                }
                Species::Lie if ab != ba.scaled(&-s) => {
                    return violation(alg, "graded antisymmetry", &[a, b]);
                }
                _ => {}
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = alg.mul(a, b);
            for c in 0..n {
                let ok = match alg.species {
                    Species::Ass | Species::Com => {
                        alg.mul_vec(&ab, &Vector::unit(c)) == alg.mul_vec(&Vector::unit(a), &alg.mul(b, c))
                    }
                    Species::Lie => {
                        // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]
                        let lhs = alg.mul_vec(&Vector::unit(a), &alg.mul(b, c));
                        let mut rhs = alg.mul_vec(&ab, &Vector::unit(c));
                        rhs.add_scaled(&alg.mul_vec(&Vector::unit(b), &alg.mul(a, c)), &sign(deg(a) * deg(b)));
                        lhs == rhs
                    }
                };
                if !ok {
                    let id = if alg.species == Species::Lie { "Jacobi identity" } else { "associativity" };
                    return violation(alg, id, &[a, b, c]);
                }
            }
        }
    }
    AxiomReport { species: alg.species, pass: true, violation: None }
}

/// The cohomology algebra together with the contraction used to compute it.
#[derive(Clone, Debug)]
pub struct CohomologyAlgebra {
    pub algebra: DgAlgebra,
    pub contraction: Contraction,
}

/// Induced product `[a][b] = f(g(a) g(b))` on the cohomology.
pub fn cohomology_algebra(alg: &DgAlgebra) -> Result<CohomologyAlgebra> {
    let (hspace, con) = cohomology_with_contraction(&alg.complex())?;
    induced_algebra(alg, hspace, con)
}

/// Transfers the product along a given contraction onto a space with zero differential.
pub fn induced_algebra(alg: &DgAlgebra, hspace: GradedSpace, con: Contraction) -> Result<CohomologyAlgebra> {
    let m = hspace.dim();
    let mut declared = BTreeMap::new();
    for a in 0..m {
        for b in 0..m {
            let v = con.f.apply(&alg.mul_vec(&con.g.cols[a], &con.g.cols[b]));
            if !v.is_zero() {
                declared.insert((a, b), v);
            }
        }
    }
    let unit = alg.unit.and_then(|u| {
        let fu = con.f.apply(&Vector::unit(u));
        match fu.first() {
            Some((i, c)) if fu.nnz() == 1 && *c == Q::from_integer(1.into()) => Some(i),
            _ => None,
        }
    });
    // unit products were already computed from the table; keep them as declared
    let mut declared_no_unit = declared.clone();
    if let Some(u) = unit {
        declared_no_unit.retain(|(a, b), _| *a != u && *b != u);
    }
    let algebra = DgAlgebra::new(
        alg.species,
        format!("H({})", alg.name),
        hspace,
        LinMap::zero(m, m),
        declared_no_unit,
        unit,
    )?;
    // the unit law must reproduce what the table gave
    for ((a, b), v) in &declared {
        if algebra.mul(*a, *b) != *v {
            return Err(Error::internal("induced product disagrees with the unit law"));
        }
    }
    Ok(CohomologyAlgebra { algebra, contraction: con })
}

/// Shipped example algebras.
pub mod fixtures {
    use super::*;

    fn build(
        species: Species,
        name: &str,
        basis: &[(&str, i32)],
        unit: Option<&str>,
        diffs: &[(&str, &[(i64, &str)])],
        prods: &[(&str, &str, &[(i64, &str)])],
    ) -> DgAlgebra {
        let space = GradedSpace::from_pairs(basis);
        let idx = |s: &str| space.index_of(s).unwrap_or_else(|| panic!("unknown name {s}"));
        let comb = |terms: &[(i64, &str)]| {
            Vector::from_pairs(terms.iter().map(|(c, s)| (idx(s), Q::from_integer((*c).into()))))
        };
        let n = space.dim();
        let mut d = LinMap::zero(n, n);
        for (x, terms) in diffs {
            d.cols[idx(x)] = comb(terms);
        }
        let mut declared = BTreeMap::new();
        for (a, b, terms) in prods {
            declared.insert((idx(a), idx(b)), comb(terms));
        }
        let unit = unit.map(idx);
        DgAlgebra::new(species, name, space, d, declared, unit).expect("fixture is well formed")
    }

    /// Abelian dg Lie algebra on one generator of degree 1.
    pub fn f1() -> DgAlgebra {
        build(Species::Lie, "F1", &[("x", 1)], None, &[], &[])
    }

    /// The Heisenberg cdga: exterior algebra on `x, y, z` of degree 1 with `dz = xy`.
    pub fn f2() -> DgAlgebra {
        build(
            Species::Com,
            "F2",
            &[("one", 0), ("x", 1), ("y", 1), ("z", 1), ("xy", 2), ("xz", 2), ("yz", 2), ("xyz", 3)],
            Some("one"),
            &[("z", &[(1, "xy")])],
            &[
                ("x", "y", &[(1, "xy")]),
                ("x", "z", &[(1, "xz")]),
                ("y", "z", &[(1, "yz")]),
                ("x", "yz", &[(1, "xyz")]),
                ("y", "xz", &[(-1, "xyz")]),
                ("z", "xy", &[(1, "xyz")]),
            ],
        )
    }

    /// A formal dg Lie algebra: abelian on `u` (degree 1) and `v` (degree 2).
    pub fn f3_formal() -> DgAlgebra {
        build(Species::Lie, "F3a", &[("u", 1), ("v", 2)], None, &[], &[])
    }

    /// A non-formal dg Lie algebra: cohomology is abelian on `a, b, c, e` while
    /// the transferred ternary bracket sends `(a, b, c)` to `±e`.
    pub fn f3() -> DgAlgebra {
        build(
            Species::Lie,
            "F3",
            &[("a", 1), ("b", 1), ("c", 1), ("w", 1), ("p", 2), ("e", 2)],
            None,
            &[("w", &[(1, "p")])],
            &[("a", "b", &[(1, "p")]), ("w", "c", &[(1, "e")])],
        )
    }

    /// The acyclic dg Lie algebra `dv = u`.
    pub fn acyclic() -> DgAlgebra {
        build(Species::Lie, "acyclic", &[("u", 1), ("v", 0)], None, &[("v", &[(1, "u")])], &[])
    }

    /// Cohomology of the even sphere: `Q[e]/(e²)`, `|e| = 2`.
    pub fn f4() -> DgAlgebra {
        build(Species::Com, "F4", &[("one", 0), ("e", 2)], Some("one"), &[], &[])
    }

    /// `sl₂` in degree 0 with basis ordered `e < f < h`.
    pub fn f5() -> DgAlgebra {
        build(
            Species::Lie,
            "F5",
            &[("e", 0), ("f", 0), ("h", 0)],
            None,
            &[],
            &[
                ("e", "f", &[(1, "h")]),
                ("h", "e", &[(2, "e")]),
                ("h", "f", &[(-2, "f")]),
            ],
        )
    }

    /// The one-dimensional algebra `Q`.
    pub fn ground_field() -> DgAlgebra {
        build(Species::Ass, "Q", &[("one", 0)], Some("one"), &[], &[])
    }

    pub fn all() -> Vec<DgAlgebra> {
        vec![f1(), f2(), f3_formal(), f3(), acyclic(), f4(), f5()]
    }
}
