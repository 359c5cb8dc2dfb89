//! Finite-dimensional path algebras A = kQ/I for a quiver Q with monomial
//! relations, over a prime field.
//!
//! Paths are stored as arrow sequences in traversal order: the word
//! `[a, b]` is the path that walks `a` first, then `b`, and requires
//! `target(a) = source(b)`. The product `p * q` concatenates `p` then `q`
//! (zero when not composable or when the word contains a relation).
//! Under this convention `e_w A e_v` is spanned by the paths from `w`
//! to `v`, and is the hom space `Hom(P_v, P_w)` between the right
//! projectives `P_v = e_v A`; morphisms act by left multiplication and
//! compose in matrix order.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::linalg::{FieldElement, PrimeField};

/// One arrow of the quiver, with endpoints as vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// Raw quiver data as loaded from the outside world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverPresentation {
    pub field: u64,
    pub vertices: Vec<String>,
    /// (name, source vertex name, target vertex name)
    pub arrows: Vec<(String, String, String)>,
    /// Arrow-name sequences in traversal order; each is a composable path
    /// declared zero.
    pub relations: Vec<Vec<String>>,
    /// Paths of length >= this bound vanish. May be omitted for acyclic
    /// quivers.
    pub nilpotency_bound: Option<u32>,
}

/// A basis path: composable arrow word in traversal order. Empty word =
/// the idempotent e_v at `source == target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

/// The built algebra: presentation, path basis, and hom-space tables.
#[derive(Debug)]
pub struct Algebra {
    field: PrimeField,
    presentation: QuiverPresentation,
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    relations: Vec<Vec<usize>>,
    paths: Vec<Path>,
    path_index: HashMap<(usize, Vec<usize>), usize>,
    /// paths_between[s][t] = ids of basis paths from s to t
    paths_between: Vec<Vec<Vec<usize>>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.presentation == other.presentation
    }
}

impl Algebra {
    /// Builds the path basis from a presentation, checking all invariants.
    pub fn build(presentation: QuiverPresentation) -> Result<Algebra> {
        let field = PrimeField::new(presentation.field)?;
        let vertices = presentation.vertices.clone();
        if vertices.is_empty() {
            return Err(Error::InvalidPresentation("no vertices".into()));
        }
        let mut vid = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vid.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidPresentation(format!(
                    "duplicate vertex {v:?}"
                )));
            }
        }
        let mut arrows = Vec::new();
        let mut aid = HashMap::new();
        for (name, s, t) in &presentation.arrows {
            let source = *vid
                .get(s)
                .ok_or_else(|| Error::InvalidPresentation(format!("unknown vertex {s:?}")))?;
            let target = *vid
                .get(t)
                .ok_or_else(|| Error::InvalidPresentation(format!("unknown vertex {t:?}")))?;
            if aid.insert(name.clone(), arrows.len()).is_some() {
                return Err(Error::InvalidPresentation(format!(
                    "duplicate arrow {name:?}"
                )));
            }
            arrows.push(Arrow {
                name: name.clone(),
                source,
                target,
            });
        }
        let mut relations = Vec::new();
        for rel in &presentation.relations {
            if rel.is_empty() {
                return Err(Error::InvalidPresentation("empty relation".into()));
            }
            let mut word = Vec::new();
            for name in rel {
                let a = *aid.get(name).ok_or_else(|| {
                    Error::InvalidPresentation(format!("unknown arrow {name:?} in relation"))
                })?;
                if let Some(&prev) = word.last() {
                    let prev: &Arrow = &arrows[prev as usize];
                    if prev.target != arrows[a].source {
                        return Err(Error::InvalidPresentation(format!(
                            "relation {rel:?} is not composable in traversal order"
                        )));
                    }
                }
                word.push(a);
            }
            relations.push(word);
        }

        if presentation.nilpotency_bound.is_none() && has_cycle(&vertices, &arrows) {
            return Err(Error::InfiniteDimensional(
                "quiver has a cycle and no nilpotency bound".into(),
            ));
        }
        if presentation.nilpotency_bound == Some(0) {
            return Err(Error::InvalidPresentation(
                "nilpotency bound must be positive".into(),
            ));
        }

        let mut alg = Algebra {
            field,
            vertices,
            arrows,
            relations,
            presentation,
            paths: Vec::new(),
            path_index: HashMap::new(),
            paths_between: Vec::new(),
        };
        alg.enumerate_paths()?;
        Ok(alg)
    }

    fn enumerate_paths(&mut self) -> Result<()> {
        let max_len = self
            .presentation
            .nilpotency_bound
            .map(|n| n as usize - 1)
            .unwrap_or(usize::MAX);
        let mut level: Vec<Path> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(v, _)| Path {
                source: v,
                target: v,
                arrows: vec![],
            })
            .collect();
        let mut all: Vec<Path> = Vec::new();
        let mut len = 0usize;
        while !level.is_empty() {
            // within a length level, order words by arrow-name sequence
            // (trivial paths keep vertex declaration order)
            let mut sorted = level.clone();
            sorted.sort_by(|a, b| {
                let ka: Vec<&str> = a.arrows.iter().map(|&i| self.arrows[i].name.as_str()).collect();
                let kb: Vec<&str> = b.arrows.iter().map(|&i| self.arrows[i].name.as_str()).collect();
                ka.cmp(&kb).then(a.source.cmp(&b.source))
            });
            all.extend(sorted);
            if len == max_len {
                break;
            }
            if all.len() > 100_000 {
                return Err(Error::InfiniteDimensional(
                    "path basis exceeds 100000 elements".into(),
                ));
            }
            let mut next = Vec::new();
            for p in &level {
                for (ai, arrow) in self.arrows.iter().enumerate() {
                    if arrow.source != p.target {
                        continue;
                    }
                    let mut word = p.arrows.clone();
                    word.push(ai);
                    if self.word_hits_relation(&word) {
                        continue;
                    }
                    next.push(Path {
                        source: p.source,
                        target: arrow.target,
                        arrows: word,
                    });
                }
            }
            level = next;
            len += 1;
        }
        for (i, p) in all.iter().enumerate() {
            self.path_index.insert((p.source, p.arrows.clone()), i);
        }
        let nv = self.vertices.len();
        let mut between = vec![vec![Vec::new(); nv]; nv];
        for (i, p) in all.iter().enumerate() {
            between[p.source][p.target].push(i);
        }
        self.paths = all;
        self.paths_between = between;
        Ok(())
    }

    /// Only suffixes can newly contain a relation when extending by one arrow.
    fn word_hits_relation(&self, word: &[usize]) -> bool {
        self.relations
            .iter()
            .any(|rel| rel.len() <= word.len() && word[word.len() - rel.len()..] == rel[..])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn presentation(&self) -> &QuiverPresentation {
        &self.presentation
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn dimension(&self) -> usize {
        self.paths.len()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path(&self, id: usize) -> &Path {
        &self.paths[id]
    }

    pub fn trivial_path(&self, vertex: usize) -> usize {
        self.path_index[&(vertex, Vec::new())]
    }

    pub fn arrow_path(&self, arrow: usize) -> usize {
        let a = &self.arrows[arrow];
        self.path_index[&(a.source, vec![arrow])]
    }

    pub fn path_id(&self, source: usize, word: &[usize]) -> Option<usize> {
        self.path_index.get(&(source, word.to_vec())).copied()
    }

    /// Ids of basis paths from `source` to `target`.
    pub fn paths_from_to(&self, source: usize, target: usize) -> &[usize] {
        &self.paths_between[source][target]
    }

    /// Concatenation `p` then `q`; None encodes zero (non-composable,
    /// relation hit, or past the nilpotency bound).
    pub fn mul_paths(&self, p: usize, q: usize) -> Option<usize> {
        let a = &self.paths[p];
        let b = &self.paths[q];
        if a.target != b.source {
            return None;
        }
        let mut word = a.arrows.clone();
        word.extend_from_slice(&b.arrows);
        self.path_index.get(&(a.source, word)).copied()
    }

    pub fn zero_elem(&self) -> AlgebraElement {
        AlgebraElement {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn path_elem(&self, path: usize) -> AlgebraElement {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(path, self.field.one());
        AlgebraElement { coeffs }
    }

    pub fn idempotent(&self, vertex: usize) -> AlgebraElement {
        self.path_elem(self.trivial_path(vertex))
    }

    pub fn unit(&self) -> AlgebraElement {
        let mut out = self.zero_elem();
        for v in 0..self.vertex_count() {
            out = self.add(&out, &self.idempotent(v));
        }
        out
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut coeffs = a.coeffs.clone();
        for (&p, &c) in &b.coeffs {
            let cur = coeffs.get(&p).copied().unwrap_or(self.field.zero());
            let s = cur.add(c);
            if s.is_zero() {
                coeffs.remove(&p);
            } else {
                coeffs.insert(p, s);
            }
        }
        AlgebraElement { coeffs }
    }

    pub fn neg(&self, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coeffs: a.coeffs.iter().map(|(&p, &c)| (p, c.neg())).collect(),
        }
    }

    pub fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: FieldElement, a: &AlgebraElement) -> AlgebraElement {
        if c.is_zero() {
            return self.zero_elem();
        }
        AlgebraElement {
            coeffs: a.coeffs.iter().map(|(&p, &k)| (p, k.mul(c))).collect(),
        }
    }

    /// Bilinear extension of path concatenation.
    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut out = self.zero_elem();
        for (&p, &cp) in &a.coeffs {
            for (&q, &cq) in &b.coeffs {
                if let Some(r) = self.mul_paths(p, q) {
                    let term = AlgebraElement {
                        coeffs: BTreeMap::from([(r, cp.mul(cq))]),
                    };
                    out = self.add(&out, &term);
                }
            }
        }
        out
    }

    /// Basis of Hom(P_v, P_w) = e_w A e_v: the paths from w to v, acting by
    /// left multiplication.
    pub fn hom_basis(&self, v: usize, w: usize) -> Vec<AlgebraElement> {
        self.paths_between[w][v]
            .iter()
            .map(|&p| self.path_elem(p))
            .collect()
    }

    /// Path ids spanning Hom(P_v, P_w).
    pub fn hom_path_ids(&self, v: usize, w: usize) -> &[usize] {
        &self.paths_between[w][v]
    }

    /// Human-readable form of a basis path: `e_v` or arrows joined by `*`.
    pub fn path_string(&self, id: usize) -> String {
        let p = &self.paths[id];
        if p.arrows.is_empty() {
            format!("e_{}", self.vertices[p.source])
        } else {
            p.arrows
                .iter()
                .map(|&a| self.arrows[a].name.clone())
                .collect::<Vec<_>>()
                .join("*")
        }
    }

    /// Parses the output of [`Algebra::path_string`].
    pub fn parse_path(&self, s: &str) -> Result<usize> {
        if let Some(v) = s.strip_prefix("e_") {
            let vertex = self
                .vertex_id(v)
                .ok_or_else(|| Error::InvalidInput(format!("unknown vertex {v:?}")))?;
            return Ok(self.trivial_path(vertex));
        }
        let mut word = Vec::new();
        for name in s.split('*') {
            let a = self
                .arrows
                .iter()
                .position(|arrow| arrow.name == name)
                .ok_or_else(|| Error::InvalidInput(format!("unknown arrow {name:?}")))?;
            word.push(a);
        }
        let source = self.arrows[word[0]].source;
        self.path_id(source, &word)
            .ok_or_else(|| Error::InvalidInput(format!("path {s:?} is zero in the algebra")))
    }

    pub fn elem_to_string(&self, a: &AlgebraElement) -> String {
        if a.coeffs.is_empty() {
            return "0".into();
        }
        a.coeffs
            .iter()
            .map(|(&p, c)| format!("{}*{}", c.value(), self.path_string(p)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn has_cycle(vertices: &[String], arrows: &[Arrow]) -> bool {
    // DFS three-color cycle detection
    let n = vertices.len();
    let mut adj = vec![Vec::new(); n];
    for a in arrows {
        adj[a.source].push(a.target);
    }
    let mut state = vec![0u8; n];
    fn visit(v: usize, adj: &[Vec<usize>], state: &mut [u8]) -> bool {
        state[v] = 1;
        for &w in &adj[v] {
            match state[w] {
                0 => {
                    if visit(w, adj, state) {
                        return true;
                    }
                }
                1 => return true,
                _ => {}
            }
        }
        state[v] = 2;
        false
    }
    (0..n).any(|v| state[v] == 0 && visit(v, &adj, &mut state))
}

/// Sparse element of the algebra: path id -> coefficient, zeros omitted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    pub coeffs: BTreeMap<usize, FieldElement>,
}

impl AlgebraElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// All referenced paths lie in the given hom set.
    pub fn supported_on(&self, allowed: &[usize]) -> bool {
        let set: HashSet<usize> = allowed.iter().copied().collect();
        self.coeffs.keys().all(|p| set.contains(p))
    }
}

/// The linear A2 quiver v1 -> v2 with one arrow `a`.
pub fn a2_presentation(field: u64) -> QuiverPresentation {
    QuiverPresentation {
        field,
        vertices: vec!["v1".into(), "v2".into()],
        arrows: vec![("a".into(), "v1".into(), "v2".into())],
        relations: vec![],
        nilpotency_bound: None,
    }
}

/// The linear A3 quiver v1 -> v2 -> v3 with the length-two composite zero.
pub fn a3_presentation(field: u64) -> QuiverPresentation {
    QuiverPresentation {
        field,
        vertices: vec!["v1".into(), "v2".into(), "v3".into()],
        arrows: vec![
            ("a".into(), "v1".into(), "v2".into()),
            ("b".into(), "v2".into(), "v3".into()),
        ],
        relations: vec![vec!["a".into(), "b".into()]],
        nilpotency_bound: None,
    }
}

/// One vertex with a loop x and x*x = 0, i.e. k[x]/(x^2).
pub fn loop_presentation(field: u64) -> QuiverPresentation {
    QuiverPresentation {
        field,
        vertices: vec!["v".into()],
        arrows: vec![("x".into(), "v".into(), "v".into())],
        relations: vec![vec!["x".into(), "x".into()]],
        nilpotency_bound: Some(2),
    }
}
