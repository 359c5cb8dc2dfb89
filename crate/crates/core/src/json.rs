//! JSON formats for algebras, complexes, maps, witnesses, shift sums and
//! towers, plus file loading with path references.
//!
//! Degrees serialize as decimal strings. Matrix entries are objects from
//! path strings ("e_v" for idempotents, arrow names joined by "*" in
//! traversal order) to coefficients. A complex's "algebra" and a map's
//! "source"/"target" may be inline objects or string paths relative to
//! the referencing file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, QuiverPresentation};
use crate::complex::{Complex, MapMatrix};
use crate::degeneration::{DegenerationWitness, NilpotencyCertificate, Side};
use crate::error::{Error, Result};
use crate::grothendieck::{ShiftSum, ShiftSumEntry, Tower, TowerStep};
use crate::morphism::{ChainMap, Homotopy};
use crate::obstruction::ObstructionReport;
use crate::triangle::{cone_complex, Triangle, TriangleCertificate, TransportedCertificate};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrowJson {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub field: u64,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    pub relations: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilpotency_bound: Option<u32>,
}

impl AlgebraJson {
    pub fn from_algebra(alg: &Algebra) -> AlgebraJson {
        let p = alg.presentation();
        AlgebraJson {
            field: p.field,
            vertices: p.vertices.clone(),
            arrows: p
                .arrows
                .iter()
                .map(|(name, source, target)| ArrowJson {
                    name: name.clone(),
                    source: source.clone(),
                    target: target.clone(),
                })
                .collect(),
            relations: p.relations.clone(),
            nilpotency_bound: p.nilpotency_bound,
        }
    }

    pub fn build(&self) -> Result<Algebra> {
        Algebra::build(QuiverPresentation {
            field: self.field,
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| (a.name.clone(), a.source.clone(), a.target.clone()))
                .collect(),
            relations: self.relations.clone(),
            nilpotency_bound: self.nilpotency_bound,
        })
    }
}

/// Inline object or path string, resolved against the referencing file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RefOr<T> {
    Path(String),
    Inline(T),
}

pub type ComponentsJson = BTreeMap<String, Vec<Vec<BTreeMap<String, i64>>>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub algebra: RefOr<AlgebraJson>,
    pub terms: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub differentials: ComponentsJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapJson {
    pub source: RefOr<ComplexJson>,
    pub target: RefOr<ComplexJson>,
    pub components: ComponentsJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComponentsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contraction: Option<ComponentsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub square_second: Option<ComponentsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub square_third: Option<ComponentsJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriangleJson {
    pub x: ComplexJson,
    pub y: ComplexJson,
    pub z: ComplexJson,
    pub f: ComponentsJson,
    pub g: ComponentsJson,
    pub h: ComponentsJson,
    pub certificate: CertificateJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NilJson {
    pub exponent: u32,
    pub homotopy: ComponentsJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessJson {
    pub side: String,
    #[serde(rename = "M")]
    pub m: ComplexJson,
    #[serde(rename = "N")]
    pub n: ComplexJson,
    #[serde(rename = "Z")]
    pub z: ComplexJson,
    pub v: ComponentsJson,
    pub u: ComponentsJson,
    pub triangle: TriangleJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nil: Option<NilJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShiftSumEntryJson {
    pub gen: String,
    pub shift: i64,
    pub mult: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TowerStepJson {
    pub map: MapJson,
    pub gen: ComplexJson,
    pub shift: i64,
    pub iso: ComponentsJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TowerJson {
    pub steps: Vec<TowerStepJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObstructionJson {
    pub kind: String,
    pub degree: i64,
    pub homology: BTreeMap<String, BTreeMap<String, usize>>,
    pub method: String,
}

// ---- domain -> json ----

fn degree_key(n: i64) -> String {
    n.to_string()
}

fn parse_degree(s: &str) -> Result<i64> {
    s.parse()
        .map_err(|_| Error::InvalidInput(format!("bad degree key {s:?}")))
}

pub fn components_to_json(
    alg: &Algebra,
    components: &BTreeMap<i64, MapMatrix>,
) -> ComponentsJson {
    let mut out = ComponentsJson::new();
    for (&n, m) in components {
        let mut rows = Vec::with_capacity(m.rows);
        for i in 0..m.rows {
            let mut row = Vec::with_capacity(m.cols);
            for j in 0..m.cols {
                let entry = m.get(i, j);
                let mut obj = BTreeMap::new();
                for (&p, c) in &entry.coeffs {
                    obj.insert(alg.path_string(p), c.value() as i64);
                }
                row.push(obj);
            }
            rows.push(row);
        }
        out.insert(degree_key(n), rows);
    }
    out
}

pub fn complex_to_json(x: &Complex) -> ComplexJson {
    let alg = x.algebra();
    ComplexJson {
        algebra: RefOr::Inline(AlgebraJson::from_algebra(alg)),
        terms: x
            .terms()
            .iter()
            .map(|(&n, list)| {
                (
                    degree_key(n),
                    list.iter().map(|&v| alg.vertices()[v].clone()).collect(),
                )
            })
            .collect(),
        differentials: components_to_json(alg, x.diffs()),
    }
}

pub fn map_to_json(f: &ChainMap) -> MapJson {
    MapJson {
        source: RefOr::Inline(complex_to_json(f.source())),
        target: RefOr::Inline(complex_to_json(f.target())),
        components: components_to_json(f.source().algebra(), f.components()),
    }
}

pub fn homotopy_to_json(h: &Homotopy) -> ComponentsJson {
    components_to_json(h.source().algebra(), h.components())
}

pub fn triangle_to_json(t: &Triangle) -> TriangleJson {
    let alg = t.x.algebra();
    let certificate = match &t.certificate {
        TriangleCertificate::Standard => CertificateJson {
            kind: "standard".into(),
            comparison: None,
            contraction: None,
            square_second: None,
            square_third: None,
        },
        TriangleCertificate::Transported(c) => CertificateJson {
            kind: "transported".into(),
            comparison: Some(components_to_json(alg, c.comparison.components())),
            contraction: Some(components_to_json(alg, c.contraction.components())),
            square_second: Some(components_to_json(alg, c.square_second.components())),
            square_third: Some(components_to_json(alg, c.square_third.components())),
        },
    };
    TriangleJson {
        x: complex_to_json(&t.x),
        y: complex_to_json(&t.y),
        z: complex_to_json(&t.z),
        f: components_to_json(alg, t.f.components()),
        g: components_to_json(alg, t.g.components()),
        h: components_to_json(alg, t.h.components()),
        certificate,
    }
}

pub fn witness_to_json(w: &DegenerationWitness) -> WitnessJson {
    let alg = w.z.algebra();
    WitnessJson {
        side: match w.side {
            Side::Left => "left".into(),
            Side::Right => "right".into(),
        },
        m: complex_to_json(&w.m),
        n: complex_to_json(&w.n),
        z: complex_to_json(&w.z),
        v: components_to_json(alg, w.v.components()),
        u: components_to_json(alg, w.u.components()),
        triangle: triangle_to_json(&w.triangle),
        nil: w.nil.as_ref().map(|c| NilJson {
            exponent: c.exponent,
            homotopy: components_to_json(alg, c.homotopy.components()),
        }),
    }
}

pub fn shift_sum_to_json(s: &ShiftSum) -> Vec<ShiftSumEntryJson> {
    s.entries
        .iter()
        .map(|e| ShiftSumEntryJson {
            gen: e.generator.clone(),
            shift: e.shift,
            mult: e.multiplicity,
        })
        .collect()
}

pub fn tower_to_json(t: &Tower) -> TowerJson {
    TowerJson {
        steps: t
            .steps
            .iter()
            .map(|s| TowerStepJson {
                map: map_to_json(&s.map),
                gen: complex_to_json(&s.cone_gen),
                shift: s.cone_shift,
                iso: components_to_json(s.cone_gen.algebra(), s.cone_iso.components()),
            })
            .collect(),
    }
}

pub fn obstruction_to_json(alg: &Algebra, r: &ObstructionReport) -> ObstructionJson {
    ObstructionJson {
        kind: "isolated-homology".into(),
        degree: r.degree,
        homology: r
            .window
            .iter()
            .map(|(&n, dims)| {
                (
                    degree_key(n),
                    dims.iter()
                        .enumerate()
                        .map(|(v, &d)| (alg.vertices()[v].clone(), d))
                        .collect(),
                )
            })
            .collect(),
        method: r.method.to_string(),
    }
}

// ---- json -> domain ----

pub fn components_from_json(
    alg: &Algebra,
    json: &ComponentsJson,
) -> Result<BTreeMap<i64, MapMatrix>> {
    let field = alg.field();
    let mut out = BTreeMap::new();
    for (key, rows) in json {
        let n = parse_degree(key)?;
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = MapMatrix::zero(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::InvalidInput(format!(
                    "ragged matrix at degree {n}"
                )));
            }
            for (j, obj) in row.iter().enumerate() {
                let mut elem = alg.zero_elem();
                for (path, &coeff) in obj {
                    let id = alg.parse_path(path)?;
                    let c = field.elem(coeff);
                    elem = alg.add(&elem, &alg.scale(c, &alg.path_elem(id)));
                }
                m.set(i, j, elem);
            }
        }
        out.insert(n, m);
    }
    Ok(out)
}

pub fn complex_from_json(json: &ComplexJson, base: Option<&Path>) -> Result<Complex> {
    let alg = match &json.algebra {
        RefOr::Inline(a) => Arc::new(a.build()?),
        RefOr::Path(p) => {
            let path = match base {
                Some(dir) => dir.join(p),
                None => PathBuf::from(p),
            };
            Arc::new(load_algebra_file(&path)?)
        }
    };
    let mut json = json.clone();
    json.algebra = RefOr::Inline(AlgebraJson::from_algebra(&alg));
    complex_from_json_with(&json, &alg)
}

/// Builds a complex over a known algebra, checking the inline algebra (if
/// any) agrees.
pub fn complex_from_json_with(json: &ComplexJson, alg: &Arc<Algebra>) -> Result<Complex> {
    if let RefOr::Inline(a) = &json.algebra {
        let built = a.build()?;
        if built != **alg {
            return Err(Error::AlgebraMismatch);
        }
    }
    let mut terms = BTreeMap::new();
    for (key, names) in &json.terms {
        let n = parse_degree(key)?;
        let mut list = Vec::with_capacity(names.len());
        for name in names {
            let v = alg
                .vertex_id(name)
                .ok_or_else(|| Error::InvalidInput(format!("unknown vertex {name:?}")))?;
            list.push(v);
        }
        terms.insert(n, list);
    }
    let diffs = components_from_json(alg, &json.differentials)?;
    Complex::new(Arc::clone(alg), terms, diffs)
}

pub fn map_from_json(json: &MapJson, base: Option<&Path>) -> Result<ChainMap> {
    let source_json = resolve_ref(&json.source, base, load_complex_json_file)?;
    let target_json = resolve_ref(&json.target, base, load_complex_json_file)?;
    let source = complex_from_json(&source_json, base)?;
    let alg = Arc::clone(source.algebra());
    let target = complex_from_json_with(&target_json, &alg)?;
    let components = components_from_json(&alg, &json.components)?;
    ChainMap::new(source, target, components)
}

pub fn triangle_from_json(json: &TriangleJson, base: Option<&Path>) -> Result<Triangle> {
    let x = complex_from_json(&json.x, base)?;
    let alg = Arc::clone(x.algebra());
    let y = complex_from_json_with(&json.y, &alg)?;
    let z = complex_from_json_with(&json.z, &alg)?;
    let f = ChainMap::new(x.clone(), y.clone(), components_from_json(&alg, &json.f)?)?;
    let g = ChainMap::new(y.clone(), z.clone(), components_from_json(&alg, &json.g)?)?;
    let h = ChainMap::new(z.clone(), x.shift(1), components_from_json(&alg, &json.h)?)?;
    let certificate = match json.certificate.kind.as_str() {
        "standard" => TriangleCertificate::Standard,
        "transported" => {
            let need = |o: &Option<ComponentsJson>, what: &str| {
                o.clone().ok_or_else(|| {
                    Error::InvalidInput(format!("transported certificate misses {what}"))
                })
            };
            let cone_f = cone_complex(&f)?;
            let comparison = ChainMap::new(
                z.clone(),
                cone_f.clone(),
                components_from_json(&alg, &need(&json.certificate.comparison, "comparison")?)?,
            )?;
            let comparison_cone = cone_complex(&comparison)?;
            let contraction = Homotopy::new(
                comparison_cone.clone(),
                comparison_cone,
                components_from_json(&alg, &need(&json.certificate.contraction, "contraction")?)?,
            )?;
            let square_second = Homotopy::new(
                y.clone(),
                cone_f.clone(),
                components_from_json(
                    &alg,
                    &need(&json.certificate.square_second, "square_second")?,
                )?,
            )?;
            let square_third = Homotopy::new(
                z.clone(),
                x.shift(1),
                components_from_json(&alg, &need(&json.certificate.square_third, "square_third")?)?,
            )?;
            TriangleCertificate::Transported(Box::new(TransportedCertificate {
                comparison,
                contraction,
                square_second,
                square_third,
            }))
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown certificate kind {other:?}"
            )))
        }
    };
    let t = Triangle {
        x,
        y,
        z,
        f,
        g,
        h,
        certificate,
    };
    t.verify()?;
    Ok(t)
}

pub fn witness_from_json(json: &WitnessJson, base: Option<&Path>) -> Result<DegenerationWitness> {
    let side = match json.side.as_str() {
        "left" => Side::Left,
        "right" => Side::Right,
        other => return Err(Error::InvalidInput(format!("unknown side {other:?}"))),
    };
    let m = complex_from_json(&json.m, base)?;
    let alg = Arc::clone(m.algebra());
    let n = complex_from_json_with(&json.n, &alg)?;
    let z = complex_from_json_with(&json.z, &alg)?;
    let v = ChainMap::new(z.clone(), z.clone(), components_from_json(&alg, &json.v)?)?;
    let u = match side {
        Side::Left => ChainMap::new(z.clone(), m.clone(), components_from_json(&alg, &json.u)?)?,
        Side::Right => ChainMap::new(m.clone(), z.clone(), components_from_json(&alg, &json.u)?)?,
    };
    let triangle = triangle_from_json(&json.triangle, base)?;
    let nil = match &json.nil {
        None => None,
        Some(nil) => Some(NilpotencyCertificate {
            exponent: nil.exponent,
            homotopy: Homotopy::new(
                z.clone(),
                z.clone(),
                components_from_json(&alg, &nil.homotopy)?,
            )?,
        }),
    };
    let w = DegenerationWitness {
        side,
        m,
        n,
        z,
        v,
        u,
        triangle,
        nil,
    };
    w.verify()?;
    Ok(w)
}

pub fn shift_sum_from_json(entries: &[ShiftSumEntryJson]) -> Result<ShiftSum> {
    let sum = ShiftSum {
        entries: entries
            .iter()
            .map(|e| ShiftSumEntry {
                generator: e.gen.clone(),
                shift: e.shift,
                multiplicity: e.mult,
            })
            .collect(),
    };
    sum.verify()?;
    Ok(sum)
}

pub fn tower_from_json(json: &TowerJson, base: Option<&Path>) -> Result<Tower> {
    let mut steps = Vec::new();
    for s in &json.steps {
        let map = map_from_json(&s.map, base)?;
        let alg = Arc::clone(map.source().algebra());
        let cone_gen = complex_from_json_with(&s.gen, &alg)?;
        let cone = cone_complex(&map)?;
        let tagged = cone_gen.shift(s.shift);
        let cone_iso = ChainMap::new(cone, tagged, components_from_json(&alg, &s.iso)?)?;
        steps.push(TowerStep {
            map,
            cone_gen,
            cone_shift: s.shift,
            cone_iso,
        });
    }
    let tower = Tower { steps };
    tower.verify()?;
    Ok(tower)
}

// ---- file plumbing ----

fn resolve_ref<T: Clone, F>(r: &RefOr<T>, base: Option<&Path>, load: F) -> Result<T>
where
    F: Fn(&Path) -> Result<T>,
{
    match r {
        RefOr::Inline(t) => Ok(t.clone()),
        RefOr::Path(p) => {
            let path = match base {
                Some(dir) => dir.join(p),
                None => PathBuf::from(p),
            };
            load(&path)
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn load_algebra_file(path: &Path) -> Result<Algebra> {
    let json: AlgebraJson = read_json(path)?;
    json.build()
}

fn load_complex_json_file(path: &Path) -> Result<ComplexJson> {
    read_json(path)
}

pub fn load_complex(path: &Path) -> Result<Complex> {
    let json: ComplexJson = read_json(path)?;
    complex_from_json(&json, path.parent())
}

pub fn load_map(path: &Path) -> Result<ChainMap> {
    let json: MapJson = read_json(path)?;
    map_from_json(&json, path.parent())
}

pub fn load_witness(path: &Path) -> Result<DegenerationWitness> {
    let json: WitnessJson = read_json(path)?;
    witness_from_json(&json, path.parent())
}

pub fn load_shift_sum(path: &Path) -> Result<ShiftSum> {
    let json: Vec<ShiftSumEntryJson> = read_json(path)?;
    shift_sum_from_json(&json)
}

pub fn load_tower(path: &Path) -> Result<Tower> {
    let json: TowerJson = read_json(path)?;
    tower_from_json(&json, path.parent())
}
