//! Finite models of fixed-locus components from reduction diagrams.
//!
//! A diagram is a tree over small orthogonal Grassmannians. Each base model
//! records which generators z_m act on its ambient space; z_m acts there as the
//! reflection in one coordinate.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CellError, Result};
use crate::f2alg::{full_mask, orbit_to_quotient, parity, AltFormF2, OrbitType, SubgroupF2};
use crate::partitions::{LieType, Partition};
use crate::solver::MultiplicityVector;

/// A multiset of A_e orbit types.
pub type FiniteModel = MultiplicityVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseModel {
    Point,
    Og12,
    Og13,
    Og14,
    Og24,
}

impl BaseModel {
    pub const ALL: [BaseModel; 5] = [BaseModel::Point, BaseModel::Og12, BaseModel::Og13, BaseModel::Og14, BaseModel::Og24];

    pub fn name(self) -> &'static str {
        match self {
            BaseModel::Point => "point",
            BaseModel::Og12 => "OG(1,2)",
            BaseModel::Og13 => "OG(1,3)",
            BaseModel::Og14 => "OG(1,4)",
            BaseModel::Og24 => "OG(2,4)",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
        Ok(match t.as_str() {
            "point" | "pt" => BaseModel::Point,
            "og(1,2)" => BaseModel::Og12,
            "og(1,3)" => BaseModel::Og13,
            "og(1,4)" => BaseModel::Og14,
            "og(2,4)" => BaseModel::Og24,
            _ => return Err(CellError::UnknownBase(s.to_string())),
        })
    }

    /// Dimension of the quadratic space the Grassmannian lives in.
    pub fn width(self) -> usize {
        match self {
            BaseModel::Point => 0,
            BaseModel::Og12 => 2,
            BaseModel::Og13 => 3,
            BaseModel::Og14 | BaseModel::Og24 => 4,
        }
    }
}

/// Reflections in the coordinates G: elements with an even number of them.
fn even_on(k: usize, g: u32) -> Result<SubgroupF2> {
    let members: Vec<u32> = (0..=full_mask(k)).filter(|&a| parity(a & g) == 0).collect();
    SubgroupF2::span(k, &members)
}

/// Commutator form of the pin lifts of coordinate reflections in G.
pub fn spin_form(k: usize, g: u32) -> Result<AltFormF2> {
    let rows = (0..k)
        .map(|i| {
            let a = 1u32 << i;
            (0..k).fold(0u32, |row, j| {
                let b = 1u32 << j;
                let v = (parity(a & g) & parity(b & g)) ^ parity(a & b & g);
                row | (v << j)
            })
        })
        .collect();
    AltFormF2::from_rows(k, rows)
}

fn generator_mask(k: usize, generators: &[usize]) -> Result<u32> {
    let mut g = 0u32;
    for &m in generators {
        if m == 0 || m > k {
            return Err(CellError::IndexOutOfRange(format!("generator z{m} with k = {k}")));
        }
        if g >> (m - 1) & 1 == 1 {
            return Err(CellError::InvalidDiagram(format!("generator z{m} listed twice")));
        }
        g |= 1 << (m - 1);
    }
    Ok(g)
}

/// Finite model of a base variety on which z_m (m in `generators`) act.
pub fn base_model(base: BaseModel, generators: &[usize], k: usize) -> Result<FiniteModel> {
    if generators.len() != base.width() {
        return Err(CellError::InvalidDiagram(format!(
            "{} needs {} generators, got {}",
            base.name(),
            base.width(),
            generators.len()
        )));
    }
    let g = generator_mask(k, generators)?;
    let mut y = FiniteModel::new(k);
    let one = BigUint::from(1u32);
    let pt = OrbitType::point(k);
    match base {
        BaseModel::Point => y.add(pt, one)?,
        BaseModel::Og12 => {
            // two isotropic lines swapped by each single reflection
            y.add(OrbitType::from_form(even_on(k, g)?, &AltFormF2::zero(k))?, one)?;
        }
        BaseModel::Og13 => {
            y.add(pt, one.clone())?;
            y.add(OrbitType::from_form(SubgroupF2::full(k), &spin_form(k, g)?)?, one)?;
        }
        BaseModel::Og14 => {
            y.add(pt, BigUint::from(2u32))?;
            y.add(OrbitType::from_form(even_on(k, g)?, &spin_form(k, g)?)?, one)?;
        }
        BaseModel::Og24 => {
            let h = even_on(k, g)?;
            y.add(OrbitType::from_form(h.clone(), &AltFormF2::zero(k))?, one.clone())?;
            y.add(OrbitType::from_form(h, &spin_form(k, g)?)?, one)?;
        }
    }
    Ok(y)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowUpSpec {
    pub of: Box<ReductionDiagram>,
    pub center: Box<ReductionDiagram>,
    pub codim: u32,
}

/// JSON forms: {"base", "generators"} | {"proj", "of"} | {"blowup": {"of", "center", "codim"}}
/// | {"copies", "of"} | {"product": [...]}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReductionDiagram {
    Base {
        base: String,
        #[serde(default)]
        generators: Vec<usize>,
    },
    ProjBundle {
        proj: u32,
        of: Box<ReductionDiagram>,
    },
    BlowUp {
        blowup: BlowUpSpec,
    },
    Copies {
        copies: u64,
        of: Box<ReductionDiagram>,
    },
    Product {
        product: Vec<ReductionDiagram>,
    },
}

impl ReductionDiagram {
    pub fn base(name: &str, generators: &[usize]) -> Self {
        ReductionDiagram::Base { base: name.to_string(), generators: generators.to_vec() }
    }

    pub fn point() -> Self {
        Self::base("point", &[])
    }

    /// Projective bundle of rank r (fibres P^{r-1}).
    pub fn proj(r: u32, of: ReductionDiagram) -> Self {
        ReductionDiagram::ProjBundle { proj: r, of: Box::new(of) }
    }

    /// Tower (P^{i_1}, …, P^{i_l}, X), outermost first.
    pub fn tower(fibres: &[u32], over: ReductionDiagram) -> Self {
        fibres.iter().rev().fold(over, |acc, &i| Self::proj(i + 1, acc))
    }

    pub fn blowup(of: ReductionDiagram, center: ReductionDiagram, codim: u32) -> Self {
        ReductionDiagram::BlowUp { blowup: BlowUpSpec { of: Box::new(of), center: Box::new(center), codim } }
    }

    pub fn copies(n: u64, of: ReductionDiagram) -> Self {
        ReductionDiagram::Copies { copies: n, of: Box::new(of) }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| CellError::InvalidDiagram(format!("{e}: {v}")))
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("diagram serializes")
    }
}

/// Product of two A-sets with the diagonal action: a pair of orbits with
/// stabilizers H1, H2 splits into [A : H1+H2] orbits with stabilizer H1∩H2
/// and the sum of the restricted forms.
pub fn product_model(left: &FiniteModel, right: &FiniteModel) -> Result<FiniteModel> {
    if left.k_prime() != right.k_prime() {
        return Err(CellError::DimensionMismatch(format!("ranks {} and {}", left.k_prime(), right.k_prime())));
    }
    let k = left.k_prime();
    let mut out = FiniteModel::new(k);
    for (o1, m1) in left.nonzero() {
        for (o2, m2) in right.nonzero() {
            let h = o1.stabilizer().intersect(o2.stabilizer())?;
            let sum = o1.stabilizer().sum(o2.stabilizer())?;
            let count = BigUint::from(1u64 << (k - sum.dim()));
            let form = o1.ambient_form().add(&o2.ambient_form())?;
            out.add(OrbitType::from_form(h, &form)?, m1 * m2 * count)?;
        }
    }
    Ok(out)
}

fn union(a: &mut FiniteModel, b: &FiniteModel) -> Result<()> {
    for (o, m) in b.nonzero() {
        a.add(o.clone(), m.clone())?;
    }
    Ok(())
}

/// Finite model of a diagram over A_e of rank k.
pub fn interpret(d: &ReductionDiagram, k: usize) -> Result<FiniteModel> {
    match d {
        ReductionDiagram::Base { base, generators } => base_model(BaseModel::from_name(base)?, generators, k),
        ReductionDiagram::ProjBundle { proj, of } => {
            if *proj == 0 {
                return Err(CellError::InvalidDiagram("projective bundle of rank 0".into()));
            }
            Ok(interpret(of, k)?.scale(&BigUint::from(*proj)))
        }
        ReductionDiagram::BlowUp { blowup } => {
            if blowup.codim < 2 {
                return Err(CellError::InvalidDiagram(format!("blow-up center of codimension {}", blowup.codim)));
            }
            let mut y = interpret(&blowup.of, k)?;
            let z = interpret(&blowup.center, k)?.scale(&BigUint::from(blowup.codim - 1));
            union(&mut y, &z)?;
            Ok(y)
        }
        ReductionDiagram::Copies { copies, of } => Ok(interpret(of, k)?.scale(&BigUint::from(*copies))),
        ReductionDiagram::Product { product } => {
            let mut it = product.iter();
            let first = it.next().ok_or_else(|| CellError::InvalidDiagram("empty product".into()))?;
            it.try_fold(interpret(first, k)?, |acc, x| product_model(&acc, &interpret(x, k)?))
        }
    }
}

/// Passes from A_e to A'_e; every orbit must be fixed by z_1⋯z_k with it in the radical.
pub fn to_quotient_model(y: &FiniteModel) -> Result<FiniteModel> {
    let k = y.k_prime();
    if k == 0 {
        return Ok(y.clone());
    }
    let mut out = FiniteModel::new(k - 1);
    for (o, m) in y.nonzero() {
        let q = orbit_to_quotient(o).map_err(|e| CellError::InvalidDiagram(format!("{o}: {e}")))?;
        out.add(q, m.clone())?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureComponent {
    /// Weight tuple of the component, as printed.
    pub tuple: String,
    pub diagram: ReductionDiagram,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    /// Parts in ascending order.
    pub partition: Vec<u32>,
    /// Whether the components cover the whole fixed locus.
    pub complete: bool,
    #[serde(default)]
    pub note: String,
    pub components: Vec<FixtureComponent>,
}

impl Fixture {
    pub fn parse(text: &str) -> Result<Self> {
        let f: Fixture = serde_json::from_str(text).map_err(|e| CellError::InvalidDiagram(e.to_string()))?;
        Partition::validate(&f.partition, LieType::C)?;
        Ok(f)
    }

    pub fn partition(&self) -> Result<Partition> {
        Partition::validate(&self.partition, LieType::C)
    }

    pub fn k(&self) -> usize {
        self.partition.len()
    }

    pub fn component(&self, tuple: &str) -> Option<&FixtureComponent> {
        self.components.iter().find(|c| c.tuple == tuple)
    }

    /// Union of all component models over A_e.
    pub fn census(&self) -> Result<FiniteModel> {
        let mut y = FiniteModel::new(self.k());
        for c in &self.components {
            union(&mut y, &interpret(&c.diagram, self.k())?)?;
        }
        Ok(y)
    }

    /// The census over A'_e, comparable with the solvers.
    pub fn census_quotient(&self) -> Result<FiniteModel> {
        to_quotient_model(&self.census()?)
    }
}

const BUILTIN: [(&str, &str); 5] = [
    ("2_2", include_str!("../fixtures/2_2.json")),
    ("2_2_2", include_str!("../fixtures/2_2_2.json")),
    ("2_2_2_2", include_str!("../fixtures/2_2_2_2.json")),
    ("2_2_4", include_str!("../fixtures/2_2_4.json")),
    ("2_4_4", include_str!("../fixtures/2_4_4.json")),
];

fn fixture_key(p: &Partition) -> String {
    p.parts().iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_")
}

/// Partitions with a shipped fixture.
pub fn builtin_fixtures() -> Vec<Partition> {
    BUILTIN
        .iter()
        .map(|(_, text)| Fixture::parse(text).and_then(|f| f.partition()).expect("shipped fixtures parse"))
        .collect()
}

/// Reads `<dir>/<parts joined by _>.json`.
pub fn load_fixture_from(dir: &Path, p: &Partition) -> Result<Fixture> {
    let path = dir.join(format!("{}.json", fixture_key(p)));
    let text = fs::read_to_string(&path).map_err(|_| CellError::NoFixture(format!("{p} (looked for {})", path.display())))?;
    let f = Fixture::parse(&text)?;
    if f.partition != p.parts() {
        return Err(CellError::InvalidDiagram(format!("{} describes {:?}", path.display(), f.partition)));
    }
    Ok(f)
}

/// The fixture for λ: from `$CELLKIT_FIXTURES` if set, otherwise the shipped copy.
pub fn load_fixture(p: &Partition) -> Result<Fixture> {
    if let Some(dir) = std::env::var_os("CELLKIT_FIXTURES") {
        return load_fixture_from(Path::new(&dir), p);
    }
    let key = fixture_key(p);
    let text = BUILTIN
        .iter()
        .find(|(name, _)| *name == key)
        .map(|(_, t)| *t)
        .ok_or_else(|| CellError::NoFixture(format!("{p}")))?;
    Fixture::parse(text)
}

/// Per-component models and the census as JSON.
pub fn fixture_report(f: &Fixture) -> Result<Value> {
    let k = f.k();
    let mut comps = Vec::new();
    for c in &f.components {
        comps.push(json!({ "tuple": c.tuple, "model": interpret(&c.diagram, k)?.to_json() }));
    }
    let census = f.census()?;
    let mut doc = BTreeMap::new();
    doc.insert("partition", json!(f.partition));
    doc.insert("complete", json!(f.complete));
    doc.insert("components", Value::Array(comps));
    doc.insert("census", census.to_json());
    doc.insert("census_quotient", to_quotient_model(&census)?.to_json());
    Ok(serde_json::to_value(doc).expect("map serializes"))
}
