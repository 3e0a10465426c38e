//! Built-in algebras: the 2-dimensional classification rows, the worked
//! examples, the cyclic convolution model, simple Novikov algebras in
//! characteristic p and a windowed infinite-dimensional family.
//!
//! Names accept inline parameters, e.g. `N3-tnp(n=1,m=0)`. Unspecified
//! scalar parameters default to 1.

use std::collections::BTreeMap;

use crate::algcore::{check_axiom, Algebra, AxiomId, BilinearOp, OpName};
use crate::exactfield::{binomial_mod_p, Field, Scalar};
use crate::{Error, Result};

pub type Params = BTreeMap<String, String>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotKind {
    Scalar,
    Integer,
}

#[derive(Clone, Copy, Debug)]
pub struct ParamSlot {
    pub name: &'static str,
    pub kind: SlotKind,
    pub default: &'static str,
}

const fn scalar(name: &'static str) -> ParamSlot {
    ParamSlot { name, kind: SlotKind::Scalar, default: "1" }
}

const fn integer(name: &'static str, default: &'static str) -> ParamSlot {
    ParamSlot { name, kind: SlotKind::Integer, default }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub slots: Vec<ParamSlot>,
    pub provenance: &'static str,
}

/// Rows of the 2-dimensional classification, in table order.
pub const TABLE_ROWS: [&str; 8] = ["T2", "T3", "N1", "N2", "N3", "N4", "N5", "N6"];

/// Parameters of each row's compatible dot family.
pub fn row_dot_params(row: &str) -> &'static [&'static str] {
    match row {
        "T2" | "N1" | "N2" | "N3" => &["m", "n"],
        _ => &[],
    }
}

fn row_circ_params(row: &str) -> &'static [&'static str] {
    if row == "N6" {
        &["l"]
    } else {
        &[]
    }
}

/// Every entry, in listing order.
pub fn entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for row in TABLE_ROWS {
        let circ: Vec<ParamSlot> = row_circ_params(row).iter().map(|&p| scalar(static_name(p))).collect();
        out.push(CatalogEntry { name: row, slots: circ.clone(), provenance: "2-dimensional Novikov classification" });
        let mut slots = circ;
        slots.extend(row_dot_params(row).iter().map(|&p| scalar(static_name(p))));
        out.push(CatalogEntry {
            name: tnp_name(row),
            slots,
            provenance: "2-dimensional classification, compatible dot family",
        });
    }
    out.extend([
        CatalogEntry { name: "Ex2.5", slots: vec![scalar("alpha")], provenance: "1-dimensional e·e = αe, e∘e = e" },
        CatalogEntry {
            name: "Ex2.11",
            slots: vec![scalar("a11"), scalar("a13"), scalar("a23")],
            provenance: "unital 3-dimensional dot with centroid-induced circ",
        },
        CatalogEntry {
            name: "Ex2.15",
            slots: vec![scalar("n"), scalar("l"), scalar("k")],
            provenance: "3-dimensional TNP that is also Novikov-Poisson with non-commutative circ",
        },
        CatalogEntry { name: "Ex3.17", slots: vec![], provenance: "solvable, Ann ≠ 0, (A∘A) ∩ Ann = 0" },
        CatalogEntry { name: "Ex3.19", slots: vec![], provenance: "not solvable, (A∘A) ∩ Ann ≠ 0" },
        CatalogEntry { name: "Ex3.21", slots: vec![], provenance: "solvable, Ann = 0; admits the nonzero dot e2·e2 = e1" },
        CatalogEntry {
            name: "CyclicConv",
            slots: vec![integer("N", "4"), scalar("a0"), scalar("a1"), scalar("a2"), scalar("a3")],
            provenance: "Z_N quotient of the Z-graded e_i∘e_j = e_{i+j} model; dot coefficients a_k for k < N",
        },
        CatalogEntry {
            name: "EulerRDNP",
            slots: vec![integer("N", "3")],
            provenance: "k[t]/(t^N) with a⋄b = D(a)·b for the Euler derivation D = t d/dt",
        },
        CatalogEntry {
            name: "SimpleNovikov",
            slots: vec![integer("p", "3"), integer("n", "1"), scalar("a"), scalar("b")],
            provenance: "simple Novikov algebra on y_{-1}..y_{p^n-2} over GF(p)",
        },
        CatalogEntry {
            name: "OsbornCase1",
            slots: vec![scalar("b"), integer("N", "4")],
            provenance: "x_i∘x_j = b x_{i+j} + j x_{i+j-1}, windowed to degrees ≤ N",
        },
    ]);
    out
}

fn static_name(p: &str) -> &'static str {
    match p {
        "m" => "m",
        "n" => "n",
        "l" => "l",
        _ => unreachable!("unknown table parameter"),
    }
}

fn tnp_name(row: &str) -> &'static str {
    match row {
        "T2" => "T2-tnp",
        "T3" => "T3-tnp",
        "N1" => "N1-tnp",
        "N2" => "N2-tnp",
        "N3" => "N3-tnp",
        "N4" => "N4-tnp",
        "N5" => "N5-tnp",
        "N6" => "N6-tnp",
        _ => unreachable!("unknown table row"),
    }
}

/// Parse `k=v,k=v`.
pub fn parse_params(s: &str) -> Result<Params> {
    let mut out = Params::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Param(format!("expected key=value, got {part:?}")))?;
        if out.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(Error::Param(format!("parameter {k} given twice")));
        }
    }
    Ok(out)
}

/// Split `Name(k=v,...)` into the name and its inline parameters.
pub fn split_name(spec: &str) -> Result<(String, Params)> {
    match spec.find('(') {
        None => Ok((spec.trim().to_string(), Params::new())),
        Some(open) => {
            let inner = spec[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Param(format!("unbalanced parentheses in {spec:?}")))?;
            Ok((spec[..open].trim().to_string(), parse_params(inner)?))
        }
    }
}

struct Resolved {
    field: Field,
    values: BTreeMap<&'static str, String>,
}

impl Resolved {
    /// Over GF(p) any integer literal is accepted and reduced.
    fn scalar(&self, name: &str) -> Result<Scalar> {
        let s = &self.values[name];
        match (self.field, s.parse::<i64>()) {
            (Field::Prime(_), Ok(n)) => Ok(self.field.from_i64(n)),
            _ => self.field.parse(s).map_err(|_| Error::Param(format!("{name}={s} is not a scalar of {}", self.field))),
        }
    }

    fn integer(&self, name: &str) -> Result<i64> {
        self.values[name].parse().map_err(|_| Error::Param(format!("{name} must be an integer")))
    }
}

fn resolve(entry: &CatalogEntry, field: Field, given: &Params) -> Result<Resolved> {
    for k in given.keys() {
        if !entry.slots.iter().any(|s| s.name == k) {
            return Err(Error::Param(format!("{} has no parameter {k}", entry.name)));
        }
    }
    let values = entry
        .slots
        .iter()
        .map(|s| (s.name, given.get(s.name).cloned().unwrap_or_else(|| s.default.to_string())))
        .collect();
    let r = Resolved { field, values };
    for s in &entry.slots {
        match s.kind {
            SlotKind::Scalar if entry.name != "SimpleNovikov" => {
                r.scalar(s.name)?;
            }
            SlotKind::Integer => {
                r.integer(s.name)?;
            }
            _ => {}
        }
    }
    Ok(r)
}

fn display_name(entry: &CatalogEntry, r: &Resolved) -> String {
    if entry.slots.is_empty() {
        return entry.name.to_string();
    }
    let args: Vec<String> = entry.slots.iter().map(|s| format!("{}={}", s.name, r.values[s.name])).collect();
    format!("{}({})", entry.name, args.join(","))
}

type Entries = Vec<(usize, usize, usize, Scalar)>;

fn op(field: Field, dim: usize, entries: Entries) -> Result<BilinearOp> {
    BilinearOp::from_entries(field, dim, entries)
}

fn table_circ(row: &str, field: Field, l: Option<Scalar>) -> Result<BilinearOp> {
    let one = field.one();
    let e = match row {
        "T2" => vec![(1, 1, 0, one)],
        "T3" => vec![(1, 0, 0, -&one)],
        "N1" => vec![(0, 0, 0, one.clone()), (1, 1, 1, one)],
        "N2" => vec![(1, 1, 1, one)],
        "N3" => vec![(0, 1, 0, one.clone()), (1, 0, 0, one.clone()), (1, 1, 1, one)],
        "N4" => vec![(0, 1, 0, one.clone()), (1, 1, 1, one)],
        "N5" => vec![(0, 1, 0, one.clone()), (1, 1, 0, one.clone()), (1, 1, 1, one)],
        "N6" => {
            let l = l.expect("N6 takes l");
            if l.is_zero() || l.is_one() {
                return Err(Error::Param("N6 requires l ≠ 0, 1".into()));
            }
            vec![(0, 1, 0, one.clone()), (1, 0, 0, l), (1, 1, 1, one)]
        }
        _ => return Err(Error::UnknownEntry(row.to_string())),
    };
    op(field, 2, e)
}

/// The tabulated compatible dot of a classification row at (m, n).
pub fn table_dot(row: &str, field: Field, m: &Scalar, n: &Scalar) -> Result<BilinearOp> {
    let e = match row {
        "T2" => vec![(0, 1, 0, m.clone()), (1, 0, 0, m.clone()), (1, 1, 0, n.clone()), (1, 1, 1, m.clone())],
        "N1" | "N2" => vec![(0, 0, 0, n.clone()), (1, 1, 1, m.clone())],
        "N3" => vec![(0, 1, 0, n.clone()), (1, 0, 0, n.clone()), (1, 1, 0, m.clone()), (1, 1, 1, n.clone())],
        "T3" | "N4" | "N5" | "N6" => vec![],
        _ => return Err(Error::UnknownEntry(row.to_string())),
    };
    op(field, 2, e)
}

/// The Novikov algebra of a classification row.
pub fn table_novikov(row: &str, field: Field, l: Option<Scalar>) -> Result<Algebra> {
    let name = match &l {
        Some(l) if row == "N6" => format!("N6(l={l})"),
        _ => row.to_string(),
    };
    Algebra::new(name, field, 2).with_circ(table_circ(row, field, l)?)
}

/// Look up a catalog entry. `field` defaults to ℚ; entries that fix their
/// own field reject a conflicting one.
pub fn catalog_get(spec: &str, field: Option<Field>, params: &Params) -> Result<Algebra> {
    let (name, mut inline) = split_name(spec)?;
    for (k, v) in params {
        if inline.insert(k.clone(), v.clone()).is_some() {
            return Err(Error::Param(format!("parameter {k} given twice")));
        }
    }
    let entry =
        entries().into_iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownEntry(name.clone()))?;
    let f = field.unwrap_or(Field::Rational);
    let r = resolve(&entry, f, &inline)?;
    let label = display_name(&entry, &r);
    let prov = entry.provenance;
    let built = match entry.name {
        row if TABLE_ROWS.contains(&row) => {
            let l = if row == "N6" { Some(r.scalar("l")?) } else { None };
            table_novikov(row, f, l)?
        }
        tnp if tnp.ends_with("-tnp") => {
            let row = &tnp[..2];
            let l = if row == "N6" { Some(r.scalar("l")?) } else { None };
            let (m, n) = if row_dot_params(row).is_empty() {
                (f.zero(), f.zero())
            } else {
                (r.scalar("m")?, r.scalar("n")?)
            };
            table_novikov(row, f, l)?.with_dot(table_dot(row, f, &m, &n)?)?
        }
        "Ex2.5" => {
            let alpha = r.scalar("alpha")?;
            Algebra::new("", f, 1)
                .with_labels(vec!["e".into()])?
                .with_dot(op(f, 1, vec![(0, 0, 0, alpha)])?)?
                .with_circ(op(f, 1, vec![(0, 0, 0, f.one())])?)?
        }
        "Ex2.11" => ex_2_11(f, &r.scalar("a11")?, &r.scalar("a13")?, &r.scalar("a23")?)?,
        "Ex2.15" => {
            let one = f.one();
            let circ = op(f, 3, vec![(1, 2, 0, one.clone()), (2, 1, 0, -&one)])?;
            let (n, l, k) = (r.scalar("n")?, r.scalar("l")?, r.scalar("k")?);
            let dot = op(f, 3, vec![(1, 1, 0, n), (1, 2, 0, l.clone()), (2, 1, 0, l), (2, 2, 0, k)])?;
            Algebra::new("", f, 3).with_dot(dot)?.with_circ(circ)?
        }
        "Ex3.17" => Algebra::new("", f, 3).with_circ(op(f, 3, vec![(2, 1, 1, f.one())])?)?,
        "Ex3.19" => {
            Algebra::new("", f, 3).with_circ(op(f, 3, vec![(0, 0, 1, f.one()), (2, 2, 2, f.one())])?)?
        }
        "Ex3.21" => {
            let half = f.ratio(1, 2)?;
            let circ = op(f, 3, vec![(1, 1, 0, f.one()), (2, 0, 0, f.one()), (2, 1, 1, half)])?;
            Algebra::new("", f, 3).with_circ(circ)?
        }
        "CyclicConv" => {
            let n = r.integer("N")?;
            if !(1..=64).contains(&n) {
                return Err(Error::Param("CyclicConv needs 1 ≤ N ≤ 64".into()));
            }
            let n = n as usize;
            let coeffs: Vec<Scalar> = (0..n)
                .map(|k| match k {
                    0..=3 => r.scalar(&format!("a{k}")),
                    _ => Ok(f.zero()),
                })
                .collect::<Result<_>>()?;
            for (k, slot) in ["a1", "a2", "a3"].iter().enumerate() {
                if k + 1 >= n && inline.contains_key(*slot) {
                    return Err(Error::Param(format!("{slot} needs N > {}", k + 1)));
                }
            }
            cyclic_conv(f, n, &coeffs)?
        }
        "EulerRDNP" => {
            let n = r.integer("N")?;
            if !(1..=64).contains(&n) {
                return Err(Error::Param("EulerRDNP needs 1 ≤ N ≤ 64".into()));
            }
            euler_rdnp(f, n as usize)?
        }
        "SimpleNovikov" => {
            let (p, n) = (r.integer("p")?, r.integer("n")?);
            if p < 3 || n < 1 {
                return Err(Error::Param("SimpleNovikov needs p ≥ 3, n ≥ 1".into()));
            }
            let gf = Field::prime(p as u64)?;
            if field.is_some_and(|g| g != gf) {
                return Err(Error::Param(format!("SimpleNovikov(p={p}) lives over {gf}")));
            }
            let r = Resolved { field: gf, values: r.values.clone() };
            simple_novikov_char_p(p as u64, n as u32, &r.scalar("a")?, &r.scalar("b")?)?
        }
        "OsbornCase1" => {
            if !f.is_rational() {
                return Err(Error::Param("OsbornCase1 is defined over ℚ".into()));
            }
            let n = r.integer("N")?;
            if !(1..=64).contains(&n) {
                return Err(Error::Param("OsbornCase1 needs 1 ≤ N ≤ 64".into()));
            }
            osborn_case1_window(&r.scalar("b")?, n as usize)?
        }
        _ => return Err(Error::UnknownEntry(name)),
    };
    let mut built = built.with_provenance(prov);
    built.name = label;
    Ok(built)
}

fn ex_2_11(f: Field, a11: &Scalar, a13: &Scalar, a23: &Scalar) -> Result<Algebra> {
    let one = f.one();
    let dot = op(
        f,
        3,
        vec![(0, 2, 0, one.clone()), (2, 0, 0, one.clone()), (1, 2, 1, one.clone()), (2, 1, 1, one.clone()), (2, 2, 2, one)],
    )?;
    let circ = op(
        f,
        3,
        vec![
            (0, 2, 0, a11.clone()),
            (2, 0, 0, a11.clone()),
            (1, 2, 1, a11.clone()),
            (2, 1, 1, a11.clone()),
            (2, 2, 0, a13.clone()),
            (2, 2, 1, a23.clone()),
            (2, 2, 2, a11.clone()),
        ],
    )?;
    Algebra::new("", f, 3).with_dot(dot)?.with_circ(circ)
}

/// e_i∘e_j = e_{i+j mod N}, e_i·e_j = Σ_k a_k e_{k+i+j mod N}.
pub fn cyclic_conv(f: Field, n: usize, coeffs: &[Scalar]) -> Result<Algebra> {
    let circ = BilinearOp::from_products(f, n, |i, j| Ok(crate::algcore::unit_vector(f, n, (i + j) % n)))?;
    let dot = BilinearOp::from_products(f, n, |i, j| {
        let mut v = crate::algcore::zero_vector(f, n);
        for (k, a) in coeffs.iter().enumerate() {
            let t = (k + i + j) % n;
            v[t] = &v[t] + a;
        }
        Ok(v)
    })?;
    Algebra::new("", f, n).with_dot(dot)?.with_circ(circ)
}

/// Truncated polynomials t^0..t^{N-1} with t^i⋄t^j = i t^{i+j}.
pub fn euler_rdnp(f: Field, n: usize) -> Result<Algebra> {
    let mut dot = BilinearOp::zero(f, n);
    let mut dia = BilinearOp::zero(f, n);
    for i in 0..n {
        for j in 0..n - i {
            dot.set(i, j, i + j, f.one());
            dia.set(i, j, i + j, f.from_i64(i as i64));
        }
    }
    let labels = (0..n).map(|i| format!("t^{{{i}}}")).collect();
    Algebra::new("", f, n).with_labels(labels)?.with_dot(dot)?.with_circ(dia)
}

/// Desk bound on p^n for the simple Novikov family.
pub const SIMPLE_NOVIKOV_BOUND: u64 = 3125;

/// y_i∘y_j = C(i+j+1, j) y_{i+j} + δ_{i,-1}δ_{j,-1} a y_{p^n-2}
/// + δ_{i,-1}δ_{j,0} b y_{p^n-2} on the basis y_{-1}..y_{p^n-2}. Terms whose
/// target leaves that range are dropped. The result is checked to be Novikov.
pub fn simple_novikov_char_p(p: u64, n: u32, a: &Scalar, b: &Scalar) -> Result<Algebra> {
    let f = Field::prime(p)?;
    for s in [a, b] {
        if s.field() != f {
            return Err(Error::FieldMismatch(f, s.field()));
        }
    }
    let size = p.checked_pow(n).filter(|&s| s <= SIMPLE_NOVIKOV_BOUND);
    let size = size.ok_or_else(|| Error::Bound(format!("{p}^{n} exceeds {SIMPLE_NOVIKOV_BOUND}")))? as i64;
    let top = size - 2;
    let dim = size as usize;
    let idx = |i: i64| (i + 1) as usize;
    let mut circ = BilinearOp::zero(f, dim);
    for i in -1..=top {
        for j in -1..=top {
            let mut v = crate::algcore::zero_vector(f, dim);
            let s = i + j;
            if (-1..=top).contains(&s) {
                v[idx(s)] = binomial_mod_p((s + 1) as u64, j, p);
            }
            if i == -1 && j == -1 {
                v[idx(top)] = &v[idx(top)] + a;
            }
            if i == -1 && j == 0 {
                v[idx(top)] = &v[idx(top)] + b;
            }
            for (k, c) in v.into_iter().enumerate() {
                circ.set(idx(i), idx(j), k, c);
            }
        }
    }
    let labels = (-1..=top).map(|i| format!("y{i}")).collect();
    let alg = Algebra::new(format!("SimpleNovikov(p={p},n={n},a={a},b={b})"), f, dim)
        .with_labels(labels)?
        .with_circ(circ)?;
    if !check_axiom(&alg, AxiomId::NovikovLeft)?.passed() {
        return Err(Error::Invalid(format!("{} fails the Novikov self-check", alg.name)));
    }
    Ok(alg)
}

/// x_i∘x_j = b x_{i+j} + j x_{i+j-1} on x_0..x_N; pairs with i+j > N are
/// masked.
pub fn osborn_case1_window(b: &Scalar, n: usize) -> Result<Algebra> {
    let f = b.field();
    if !f.is_rational() {
        return Err(Error::Param("defined over ℚ only".into()));
    }
    let dim = n + 1;
    let mut circ = BilinearOp::zero(f, dim);
    let mut mask = std::collections::BTreeSet::new();
    for i in 0..dim {
        for j in 0..dim {
            if i + j > n {
                mask.insert((i, j));
                continue;
            }
            circ.set(i, j, i + j, b.clone());
            if j > 0 {
                let prev = circ.coeff(i, j, i + j - 1);
                circ.set(i, j, i + j - 1, &prev + &f.from_i64(j as i64));
            }
        }
    }
    circ.set_mask(mask);
    let labels = (0..dim).map(|i| format!("x{i}")).collect();
    Algebra::new(format!("OsbornCase1(b={b},N={n})"), f, dim).with_labels(labels)?.with_circ(circ)
}

/// Names of every entry that carries both operations and should pass TNP.
pub fn tnp_entry_names() -> Vec<&'static str> {
    entries()
        .into_iter()
        .map(|e| e.name)
        .filter(|n| n.ends_with("-tnp") || matches!(*n, "Ex2.5" | "Ex2.11" | "Ex2.15" | "CyclicConv"))
        .collect()
}

/// Names of the Novikov-only entries (circ without dot).
pub fn novikov_entry_names() -> Vec<&'static str> {
    let mut v: Vec<&'static str> = TABLE_ROWS.to_vec();
    v.extend(["Ex3.17", "Ex3.19", "Ex3.21"]);
    v
}

/// Does the algebra carry the op.
pub fn has_op(a: &Algebra, op: OpName) -> bool {
    a.op(op).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_params() {
        let a = catalog_get("N3-tnp(n=1,m=0)", None, &Params::new()).unwrap();
        assert_eq!(a.name, "N3-tnp(m=0,n=1)");
        let d = a.dot().unwrap();
        let q = Field::Rational;
        assert_eq!(d.coeff(0, 1, 0), q.one());
        assert_eq!(d.coeff(1, 1, 1), q.one());
        assert!(d.coeff(1, 1, 0).is_zero());
    }

    #[test]
    fn rejects_unknowns() {
        assert!(matches!(catalog_get("N7", None, &Params::new()), Err(Error::UnknownEntry(_))));
        assert!(matches!(catalog_get("N1-tnp(z=1)", None, &Params::new()), Err(Error::Param(_))));
        assert!(matches!(catalog_get("N6(l=1)", None, &Params::new()), Err(Error::Param(_))));
    }

    #[test]
    fn default_is_one() {
        let a = catalog_get("Ex2.5", None, &Params::new()).unwrap();
        assert!(a.dot().unwrap().coeff(0, 0, 0).is_one());
    }
}
