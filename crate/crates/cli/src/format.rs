//! The versioned JSON document format.
//!
//! Every file is `{"kind", "version", "payload"}`. Parsing is strict: unknown
//! fields are rejected, rationals must be strings in lowest terms, and every
//! diagnostic names the offending field.

use std::collections::BTreeMap;
use std::fmt;

use opcalc_core::exactlin::{GradedVectorSpace, Matrix, Scalar, SignRule, SparseVec};
use opcalc_core::operads::{builtin_operad, Operad, Signature};
use opcalc_core::symrep::SymGroupModule;
use opcalc_core::symseq::SymmetricSequence;
use opcalc_core::triples::AnalyticTriple;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

pub const FORMAT_VERSION: u32 = 1;

/// A malformed or inconsistent document. `path` is the dotted field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub path: String,
    pub message: String,
}

impl FormatError {
    fn at(path: impl Into<String>, message: impl fmt::Display) -> Self {
        FormatError { path: path.into(), message: message.to_string() }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for FormatError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Operad,
    Triple,
    Algebra,
    Sequence,
    Report,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Operad => "operad",
            Kind::Triple => "triple",
            Kind::Algebra => "algebra",
            Kind::Sequence => "sequence",
            Kind::Report => "report",
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    kind: Kind,
    version: u32,
    payload: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Operad(OperadDoc),
    Triple(TripleDoc),
    Algebra(AlgebraDoc),
    Sequence(SequenceDoc),
    Report(Value),
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::Operad(_) => Kind::Operad,
            Document::Triple(_) => Kind::Triple,
            Document::Algebra(_) => Kind::Algebra,
            Document::Sequence(_) => Kind::Sequence,
            Document::Report(_) => Kind::Report,
        }
    }

    pub fn parse(text: &str) -> Result<Document, FormatError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let env: Envelope = serde_path_to_error::deserialize(de).map_err(|e| path_error("", e))?;
        if env.version != FORMAT_VERSION {
            return Err(FormatError::at(
                "version",
                format!("unsupported format version {} (this build reads version {FORMAT_VERSION})", env.version),
            ));
        }
        Ok(match env.kind {
            Kind::Operad => Document::Operad(payload(env.payload)?),
            Kind::Triple => Document::Triple(payload(env.payload)?),
            Kind::Algebra => Document::Algebra(payload(env.payload)?),
            Kind::Sequence => Document::Sequence(payload(env.payload)?),
            Kind::Report => Document::Report(env.payload),
        })
    }

    /// Canonical form: indented JSON with sorted map keys and a trailing newline.
    pub fn emit(&self) -> String {
        let payload = match self {
            Document::Operad(d) => serde_json::to_value(d),
            Document::Triple(d) => serde_json::to_value(d),
            Document::Algebra(d) => serde_json::to_value(d),
            Document::Sequence(d) => serde_json::to_value(d),
            Document::Report(v) => Ok(v.clone()),
        }
        .expect("documents serialize");
        let env = Envelope { kind: self.kind(), version: FORMAT_VERSION, payload };
        let mut s = String::new();
        write_value(&mut s, &serde_json::to_value(&env).expect("documents serialize"), 0);
        s.push('\n');
        s
    }
}

/// Pretty JSON, except that arrays of scalars stay on one line.
fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n("  ", n));
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            out.push_str(&serde_json::to_string(v).expect("scalars serialize"));
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalars serialize")),
    }
}

fn payload<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T, FormatError> {
    serde_path_to_error::deserialize(v).map_err(|e| path_error("payload", e))
}

fn path_error<E: fmt::Display>(prefix: &str, e: serde_path_to_error::Error<E>) -> FormatError {
    let inner = e.path().to_string();
    let path = match (prefix.is_empty(), inner == ".") {
        (true, _) => inner,
        (false, true) => prefix.to_string(),
        (false, false) => format!("{prefix}.{inner}"),
    };
    FormatError::at(path, e.into_inner())
}

/// A rational serialized as `"p"` or `"p/q"` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational(pub Scalar);

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let q = Scalar::parse_canonical(&s).map_err(de::Error::custom)?;
        if q.to_string() != s {
            return Err(de::Error::custom(format!("{s:?} is not in canonical form (expected {:?})", q.to_string())));
        }
        Ok(Rational(q))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignDoc {
    Koszul,
    Plain,
}

impl From<SignRule> for SignDoc {
    fn from(r: SignRule) -> Self {
        match r {
            SignRule::Koszul => SignDoc::Koszul,
            SignRule::Plain => SignDoc::Plain,
        }
    }
}

impl From<SignDoc> for SignRule {
    fn from(r: SignDoc) -> Self {
        match r {
            SignDoc::Koszul => SignRule::Koszul,
            SignDoc::Plain => SignRule::Plain,
        }
    }
}

/// A dense matrix: `rows[i][j]`, with an explicit shape so empty matrices survive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub shape: [usize; 2],
    pub rows: Vec<Vec<Rational>>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &Matrix) -> Self {
        let rows = m.to_dense().into_iter().map(|r| r.into_iter().map(Rational).collect()).collect();
        MatrixDoc { shape: [m.nrows(), m.ncols()], rows }
    }

    pub fn to_matrix(&self, path: &str) -> Result<Matrix, FormatError> {
        let [r, c] = self.shape;
        if self.rows.len() != r {
            return Err(FormatError::at(format!("{path}.rows"), format!("expected {r} rows, found {}", self.rows.len())));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != c {
                return Err(FormatError::at(
                    format!("{path}.rows[{i}]"),
                    format!("expected {c} entries, found {}", row.len()),
                ));
            }
        }
        let dense: Vec<Vec<Scalar>> = self.rows.iter().map(|row| row.iter().map(|q| q.0.clone()).collect()).collect();
        Ok(Matrix::from_rows(&dense, c))
    }
}

fn vector_doc(v: &SparseVec, len: usize) -> Vec<Rational> {
    v.to_dense(len).into_iter().map(Rational).collect()
}

fn vector_from_doc(v: &[Rational], len: usize, path: &str) -> Result<SparseVec, FormatError> {
    if v.len() != len {
        return Err(FormatError::at(path, format!("expected {len} entries, found {}", v.len())));
    }
    Ok(SparseVec::from_dense(&v.iter().map(|q| q.0.clone()).collect::<Vec<_>>()))
}

/// Graded dimensions as `[[degree, dim], …]` in increasing degree.
pub fn graded_doc(v: &GradedVectorSpace) -> Vec<(i32, usize)> {
    v.dims().iter().map(|(&d, &n)| (d, n)).collect()
}

pub fn graded_from_doc(pairs: &[(i32, usize)], path: &str) -> Result<GradedVectorSpace, FormatError> {
    if pairs.windows(2).any(|w| w[0].0 >= w[1].0) || pairs.iter().any(|p| p.1 == 0) {
        return Err(FormatError::at(path, "degrees must be strictly increasing with positive dimensions"));
    }
    Ok(GradedVectorSpace::from_pairs(pairs))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub arity: usize,
    pub dims: Vec<(i32, usize)>,
    /// Images of the adjacent transpositions `(i, i+1)`.
    pub gens: Vec<MatrixDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDoc {
    pub sign_rule: SignDoc,
    pub unital: bool,
    pub components: Vec<ModuleDoc>,
}

impl SequenceDoc {
    pub fn from_sequence(seq: &SymmetricSequence) -> Self {
        let components = seq
            .components()
            .iter()
            .map(|m| ModuleDoc {
                arity: m.arity(),
                dims: graded_doc(m.space()),
                gens: m.gens().iter().map(MatrixDoc::from_matrix).collect(),
            })
            .collect();
        SequenceDoc { sign_rule: seq.sign_rule().into(), unital: seq.is_unital(), components }
    }

    pub fn to_sequence(&self, path: &str) -> Result<SymmetricSequence, FormatError> {
        let mut comps = Vec::new();
        for (n, m) in self.components.iter().enumerate() {
            let here = format!("{path}.components[{n}]");
            if m.arity != n {
                return Err(FormatError::at(format!("{here}.arity"), format!("expected {n}, found {}", m.arity)));
            }
            let space = graded_from_doc(&m.dims, &format!("{here}.dims"))?;
            let gens = m
                .gens
                .iter()
                .enumerate()
                .map(|(k, g)| g.to_matrix(&format!("{here}.gens[{k}]")))
                .collect::<Result<Vec<_>, _>>()?;
            comps.push(SymGroupModule::new(n, space, gens).map_err(|e| FormatError::at(&here, e))?);
        }
        let rule = self.sign_rule.into();
        let seq = if self.unital {
            SymmetricSequence::new_unital(comps, rule)
        } else {
            SymmetricSequence::new(comps, rule)
        };
        seq.map_err(|e| FormatError::at(format!("{path}.components"), e))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperadDoc {
    pub name: String,
    pub sequence: SequenceDoc,
    pub unit: Vec<Rational>,
    /// `γ` per signature `"k;j1,…,jk"`, columns in the lexicographic tensor basis.
    pub gamma: BTreeMap<String, MatrixDoc>,
}

impl OperadDoc {
    pub fn from_operad(op: &Operad) -> Self {
        let gamma = op.gamma_tables().iter().map(|(s, m)| (s.to_string(), MatrixDoc::from_matrix(m))).collect();
        OperadDoc {
            name: op.name().to_string(),
            sequence: SequenceDoc::from_sequence(op.seq()),
            unit: vector_doc(op.unit(), op.dim(1)),
            gamma,
        }
    }

    pub fn to_operad(&self) -> Result<Operad, FormatError> {
        let seq = self.sequence.to_sequence("payload.sequence")?;
        let unit = vector_from_doc(&self.unit, seq.dim(1), "payload.unit")?;
        let mut gamma = BTreeMap::new();
        for (key, m) in &self.gamma {
            let path = format!("payload.gamma.{key}");
            let sig = Signature::parse(key).ok_or_else(|| FormatError::at(&path, "not a signature \"k;j1,…,jk\""))?;
            if sig.to_string() != *key {
                return Err(FormatError::at(&path, format!("signature key is not canonical (expected {sig})")));
            }
            gamma.insert(sig, m.to_matrix(&path)?);
        }
        Operad::new(self.name.clone(), seq, unit, gamma).map_err(|e| FormatError::at("payload.gamma", e))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleDoc {
    pub name: String,
    pub sequence: SequenceDoc,
    /// `μ` in arity `n`, columns on the set-partition basis of `F∘F`.
    pub mu: Vec<MatrixDoc>,
    pub eta: Vec<Rational>,
}

impl TripleDoc {
    pub fn from_triple(t: &AnalyticTriple) -> Self {
        TripleDoc {
            name: t.name().to_string(),
            sequence: SequenceDoc::from_sequence(t.seq()),
            mu: (0..=t.max_arity()).map(|n| MatrixDoc::from_matrix(t.mu(n))).collect(),
            eta: vector_doc(t.eta(), t.seq().dim(1)),
        }
    }

    pub fn to_triple(&self) -> Result<AnalyticTriple, FormatError> {
        let seq = self.sequence.to_sequence("payload.sequence")?;
        let eta = vector_from_doc(&self.eta, seq.dim(1), "payload.eta")?;
        let mu = self
            .mu
            .iter()
            .enumerate()
            .map(|(n, m)| m.to_matrix(&format!("payload.mu[{n}]")))
            .collect::<Result<Vec<_>, _>>()?;
        AnalyticTriple::new(self.name.clone(), seq, mu, eta).map_err(|e| FormatError::at("payload.mu", e))
    }
}

/// A builtin operad named by `name` (`com`, `assoc`, `lie`, `poisson(n)`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperadRef {
    pub name: String,
    pub max_arity: usize,
    pub sign_rule: SignDoc,
}

impl OperadRef {
    pub fn resolve(&self, path: &str) -> Result<Operad, FormatError> {
        builtin_operad(&self.name, self.max_arity, self.sign_rule.into()).map_err(|e| FormatError::at(path, e))
    }
}

/// One term `coef · θ(e₀; x_{w₁}, …, x_{w_k})` of a relation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coef: Rational,
    pub word: Vec<usize>,
}

/// `T_a(X)/(relations)` through internal degree `degree_cap`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub operad: OperadRef,
    pub generators: Vec<(i32, usize)>,
    pub degree_cap: i32,
    pub relations: Vec<Vec<TermDoc>>,
    /// Arities whose structure map is replaced by zero.
    pub killed_arities: Vec<usize>,
}

impl AlgebraDoc {
    pub fn to_algebra(&self) -> Result<opcalc_core::algebras::AlgebraOverOperad, FormatError> {
        let op = self.operad.resolve("payload.operad")?;
        let x = graded_from_doc(&self.generators, "payload.generators")?;
        let free = opcalc_core::algebras::free_algebra(&op, &x, self.degree_cap)
            .map_err(|e| FormatError::at("payload.degree_cap", e))?;
        let mut rels = Vec::new();
        for (i, terms) in self.relations.iter().enumerate() {
            let mut r = SparseVec::new();
            for (j, t) in terms.iter().enumerate() {
                let path = format!("payload.relations[{i}][{j}].word");
                if t.word.is_empty() || t.word.len() > op.max_arity() {
                    return Err(FormatError::at(path, format!("word length must be between 1 and {}", op.max_arity())));
                }
                if let Some(&g) = t.word.iter().find(|&&g| g >= x.total_dim()) {
                    return Err(FormatError::at(path, format!("generator {g} out of range (dim X = {})", x.total_dim())));
                }
                r = r.add_scaled(&free.free_monomial(&t.word), &t.coef.0);
            }
            rels.push(r);
        }
        let mut a = free.quotient(&rels).map_err(|e| FormatError::at("payload.relations", e))?;
        for (i, &n) in self.killed_arities.iter().enumerate() {
            if n < 2 || n > op.max_arity() {
                return Err(FormatError::at(format!("payload.killed_arities[{i}]"), "arity out of range"));
            }
            a = a.with_killed_arity(n);
        }
        Ok(a)
    }
}
