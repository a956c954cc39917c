//! On-disk documents. Every file is a JSON object with `schema_version`
//! and `kind`; matrices are flat row-major arrays of `[re, im]` pairs.

use num_complex::Complex64;
use qgame::herm::CMatrix;
use qgame::mmw::Reduction;
use qgame::{
    DensityMatrix, EquilibriumResult, HermMatrix, Measurement, Outcome, PayoffObservable,
    PsdpResult, SuperOpSdp,
};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::canonical::to_canonical_string;

pub const SCHEMA_VERSION: u64 = 1;

/// Largest accepted `n` or `m`; joint matrices are `(nm)²` entries.
pub const MAX_DIM: u64 = 256;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("field `{field}`: {source}")]
    Model {
        field: String,
        #[source]
        source: qgame::Error,
    },
}

type Result<T> = std::result::Result<T, FormatError>;

fn field_err(field: &str, message: impl Into<String>) -> FormatError {
    FormatError::Field {
        field: field.to_string(),
        message: message.into(),
    }
}

fn model_err(field: &str) -> impl FnOnce(qgame::Error) -> FormatError + '_ {
    move |source| FormatError::Model {
        field: field.to_string(),
        source,
    }
}

/// `sha256:<hex>` of the raw input bytes.
pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

// ---------------------------------------------------------------------------
// reading

struct Fields<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

impl<'a> Fields<'a> {
    fn new(value: &'a Value, path: &str) -> Result<Self> {
        let map = value
            .as_object()
            .ok_or_else(|| field_err(path, "expected an object"))?;
        Ok(Fields {
            map,
            path: path.to_string(),
        })
    }

    fn name(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    /// Rejects keys outside `allowed`.
    fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.map.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(field_err(&self.name(k), "unknown field")),
            None => Ok(()),
        }
    }

    fn get(&self, key: &str) -> Result<&'a Value> {
        self.map
            .get(key)
            .ok_or_else(|| field_err(&self.name(key), "missing"))
    }

    fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    fn u64(&self, key: &str) -> Result<u64> {
        self.get(key)?
            .as_u64()
            .ok_or_else(|| field_err(&self.name(key), "expected a non-negative integer"))
    }

    fn f64(&self, key: &str) -> Result<f64> {
        let x = self
            .get(key)?
            .as_f64()
            .ok_or_else(|| field_err(&self.name(key), "expected a number"))?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(field_err(&self.name(key), "not finite"))
        }
    }

    fn bool(&self, key: &str) -> Result<bool> {
        self.get(key)?
            .as_bool()
            .ok_or_else(|| field_err(&self.name(key), "expected a boolean"))
    }

    fn str(&self, key: &str) -> Result<&'a str> {
        self.get(key)?
            .as_str()
            .ok_or_else(|| field_err(&self.name(key), "expected a string"))
    }

    fn f64_array(&self, key: &str) -> Result<Vec<f64>> {
        let name = self.name(key);
        let items = self
            .get(key)?
            .as_array()
            .ok_or_else(|| field_err(&name, "expected an array"))?;
        items
            .iter()
            .enumerate()
            .map(|(k, v)| {
                v.as_f64()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| field_err(&format!("{name}[{k}]"), "expected a finite number"))
            })
            .collect()
    }

    fn matrix(&self, key: &str, dim: usize) -> Result<CMatrix> {
        read_matrix(self.get(key)?, &self.name(key), dim)
    }

    fn herm(&self, key: &str, dim: usize) -> Result<HermMatrix> {
        HermMatrix::new(self.matrix(key, dim)?).map_err(model_err(&self.name(key)))
    }

    fn density(&self, key: &str, dim: usize) -> Result<DensityMatrix> {
        DensityMatrix::new(self.herm(key, dim)?).map_err(model_err(&self.name(key)))
    }

    fn dims(&self) -> Result<(usize, usize)> {
        let mut out = [0usize; 2];
        for (slot, key) in out.iter_mut().zip(["n", "m"]) {
            let d = self.u64(key)?;
            if d == 0 || d > MAX_DIM {
                return Err(field_err(
                    &self.name(key),
                    format!("must be between 1 and {MAX_DIM}"),
                ));
            }
            *slot = d as usize;
        }
        if out[0] * out[1] > MAX_DIM as usize {
            return Err(field_err(
                &self.name("m"),
                format!("n·m must not exceed {MAX_DIM}"),
            ));
        }
        Ok((out[0], out[1]))
    }
}

fn read_matrix(value: &Value, name: &str, dim: usize) -> Result<CMatrix> {
    let items = value
        .as_array()
        .ok_or_else(|| field_err(name, "expected an array of [re, im] pairs"))?;
    if items.len() != dim * dim {
        return Err(field_err(
            name,
            format!("expected {} entries for a {dim}x{dim} matrix, found {}", dim * dim, items.len()),
        ));
    }
    let mut entries = Vec::with_capacity(items.len());
    for (k, item) in items.iter().enumerate() {
        let pair = item.as_array().filter(|p| p.len() == 2);
        let parts = pair.and_then(|p| Some((p[0].as_f64()?, p[1].as_f64()?)));
        match parts {
            Some((re, im)) if re.is_finite() && im.is_finite() => {
                entries.push(Complex64::new(re, im))
            }
            _ => {
                return Err(field_err(
                    &format!("{name}[{k}]"),
                    "expected a pair [re, im] of finite numbers",
                ))
            }
        }
    }
    Ok(CMatrix::from_row_slice(dim, dim, &entries))
}

fn parse_json(bytes: &[u8]) -> Result<Value> {
    serde_json::from_slice(bytes).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn header<'a>(value: &'a Value) -> Result<(Fields<'a>, &'a str)> {
    let fields = Fields::new(value, "")?;
    let version = fields.u64("schema_version")?;
    if version != SCHEMA_VERSION {
        return Err(field_err(
            "schema_version",
            format!("unsupported version {version}, expected {SCHEMA_VERSION}"),
        ));
    }
    let kind = fields.str("kind")?;
    Ok((fields, kind))
}

// ---------------------------------------------------------------------------
// writing

fn write_matrix(m: &CMatrix) -> Value {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out.push(json!([z.re, z.im]));
        }
    }
    Value::Array(out)
}

fn write_herm(m: &HermMatrix) -> Value {
    write_matrix(m.as_matrix())
}

fn document(kind: &str, n: usize, m: usize) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    map.insert("kind".into(), json!(kind));
    map.insert("n".into(), json!(n));
    map.insert("m".into(), json!(m));
    map
}

// ---------------------------------------------------------------------------
// instances

/// Super-operator `Φ: L(C^m) → L(C^n)` given by its images of the matrix
/// units, `images[i·m + j] = Φ(E_ij)`.
#[derive(Debug, Clone)]
pub struct SuperopFile {
    pub n: usize,
    pub m: usize,
    pub images: Vec<CMatrix>,
}

impl SuperopFile {
    /// `Φ(B) = Σ B_ij Φ(E_ij)`.
    pub fn apply(&self, b: &CMatrix) -> std::result::Result<CMatrix, qgame::Error> {
        if b.nrows() != self.m || b.ncols() != self.m {
            return Err(qgame::Error::Dimension {
                context: "superop apply",
                expected: self.m,
                found: b.nrows(),
            });
        }
        let mut out = CMatrix::zeros(self.n, self.n);
        for i in 0..self.m {
            for j in 0..self.m {
                out += &self.images[i * self.m + j] * b[(i, j)];
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub enum Instance {
    Observable(PayoffObservable),
    Measurement(Measurement),
    Psdp(SuperOpSdp),
    Superop(SuperopFile),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Observable(_) => "observable",
            Instance::Measurement(_) => "measurement",
            Instance::Psdp(_) => "psdp",
            Instance::Superop(_) => "superop",
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            Instance::Observable(obs) => {
                let mut map = document("observable", obs.n(), obs.m());
                map.insert("observable".into(), write_herm(obs.matrix()));
                Value::Object(map)
            }
            Instance::Measurement(meas) => {
                let mut map = document("measurement", meas.n(), meas.m());
                let outcomes = meas
                    .outcomes()
                    .iter()
                    .map(|o| {
                        json!({
                            "label": o.label,
                            "operator": write_herm(&o.operator),
                            "payoff": o.payoff,
                        })
                    })
                    .collect();
                map.insert("outcomes".into(), Value::Array(outcomes));
                Value::Object(map)
            }
            Instance::Psdp(sdp) => {
                let mut map = document("psdp", sdp.a().dim(), sdp.b().dim());
                map.insert("a".into(), write_herm(sdp.a()));
                map.insert("b".into(), write_herm(sdp.b()));
                map.insert("psi_choi".into(), write_herm(sdp.psi().choi()));
                Value::Object(map)
            }
            Instance::Superop(s) => {
                let mut map = document("superop", s.n, s.m);
                let images = s.images.iter().map(write_matrix).collect();
                map.insert("images".into(), Value::Array(images));
                Value::Object(map)
            }
        }
    }

    pub fn to_canonical(&self) -> String {
        to_canonical_string(&self.to_value())
    }
}

pub fn parse_instance(bytes: &[u8]) -> Result<Instance> {
    let value = parse_json(bytes)?;
    let (f, kind) = header(&value)?;
    match kind {
        "observable" => {
            f.only(&["schema_version", "kind", "n", "m", "observable"])?;
            let (n, m) = f.dims()?;
            let r = f.herm("observable", n * m)?;
            let obs = PayoffObservable::new(n, m, r).map_err(model_err("observable"))?;
            Ok(Instance::Observable(obs))
        }
        "measurement" => {
            f.only(&["schema_version", "kind", "n", "m", "outcomes"])?;
            let (n, m) = f.dims()?;
            let items = f
                .get("outcomes")?
                .as_array()
                .ok_or_else(|| field_err("outcomes", "expected an array"))?;
            let mut outcomes = Vec::with_capacity(items.len());
            for (k, item) in items.iter().enumerate() {
                let o = Fields::new(item, &format!("outcomes[{k}]"))?;
                o.only(&["label", "operator", "payoff"])?;
                outcomes.push(Outcome {
                    label: o.str("label")?.to_string(),
                    operator: o.herm("operator", n * m)?,
                    payoff: o.f64("payoff")?,
                });
            }
            let meas = Measurement::new(n, m, outcomes).map_err(model_err("outcomes"))?;
            Ok(Instance::Measurement(meas))
        }
        "psdp" => {
            f.only(&["schema_version", "kind", "n", "m", "a", "b", "psi_choi"])?;
            let (n, m) = f.dims()?;
            let a = f.herm("a", n)?;
            let b = f.herm("b", m)?;
            let choi = f.herm("psi_choi", n * m)?;
            let sdp = SuperOpSdp::new(a, b, choi).map_err(model_err("psi_choi"))?;
            Ok(Instance::Psdp(sdp))
        }
        "superop" => {
            f.only(&["schema_version", "kind", "n", "m", "images"])?;
            let (n, m) = f.dims()?;
            let items = f
                .get("images")?
                .as_array()
                .ok_or_else(|| field_err("images", "expected an array"))?;
            if items.len() != m * m {
                return Err(field_err(
                    "images",
                    format!("expected {} images (one per matrix unit), found {}", m * m, items.len()),
                ));
            }
            let images = items
                .iter()
                .enumerate()
                .map(|(k, v)| read_matrix(v, &format!("images[{k}]"), n))
                .collect::<Result<Vec<_>>>()?;
            Ok(Instance::Superop(SuperopFile { n, m, images }))
        }
        other => Err(field_err(
            "kind",
            format!("expected one of observable, measurement, psdp, superop; found `{other}`"),
        )),
    }
}

// ---------------------------------------------------------------------------
// candidates and results

/// A claimed approximate equilibrium. `sigma` is Bob's state as it enters
/// `⟨R, ρ⊗σ⟩`.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub n: usize,
    pub m: usize,
    pub rho: DensityMatrix,
    pub sigma: DensityMatrix,
    pub epsilon: f64,
}

impl Candidate {
    pub fn to_value(&self) -> Value {
        let mut map = document("candidate", self.n, self.m);
        map.insert("rho".into(), write_herm(self.rho.as_herm()));
        map.insert("sigma".into(), write_herm(self.sigma.as_herm()));
        map.insert("epsilon".into(), json!(self.epsilon));
        Value::Object(map)
    }

    pub fn to_canonical(&self) -> String {
        to_canonical_string(&self.to_value())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub payoffs: Vec<f64>,
    pub alice_lhs: f64,
    pub alice_rhs: f64,
    pub bob_lhs: f64,
    pub bob_rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamsRecord {
    pub epsilon: f64,
    pub epsilon_iterated: f64,
    pub mu: f64,
    pub mu_override: bool,
    pub iter_override: bool,
    pub guarantee_on_original: bool,
    /// `direct`, `rescaled` or `degenerate`.
    pub reduction: String,
    pub a_priori_epsilon: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ResultFile {
    pub n: usize,
    pub m: usize,
    pub input_digest: String,
    pub rho: DensityMatrix,
    pub sigma: DensityMatrix,
    pub value_lo: f64,
    pub value_mid: f64,
    pub value_hi: f64,
    pub gap: f64,
    pub certified_epsilon: f64,
    pub iterations: u64,
    pub params: ParamsRecord,
    pub wall_time_seconds: f64,
    pub trace: Option<TraceRecord>,
}

/// Serialized values may differ from exact order by rounding only.
const ORDER_SLACK: f64 = 1e-9;

impl ResultFile {
    pub fn from_solve(
        input_digest: String,
        res: &EquilibriumResult,
        params: &qgame::SolverParams,
        wall_time_seconds: f64,
    ) -> Self {
        let reduction = match res.reduction {
            Reduction::Direct => "direct",
            Reduction::Rescaled { .. } => "rescaled",
            Reduction::Degenerate => "degenerate",
        };
        ResultFile {
            n: res.rho.dim(),
            m: res.sigma.dim(),
            input_digest,
            rho: res.rho.clone(),
            sigma: res.sigma.clone(),
            value_lo: res.value_lo,
            value_mid: res.value_mid,
            value_hi: res.value_hi,
            gap: res.gap,
            certified_epsilon: res.certified_epsilon,
            iterations: res.iterations as u64,
            params: ParamsRecord {
                epsilon: params.epsilon,
                epsilon_iterated: res.epsilon_iterated,
                mu: res.mu,
                mu_override: params.mu_override.is_some(),
                iter_override: params.iter_override.is_some(),
                guarantee_on_original: params.guarantee_on_original,
                reduction: reduction.to_string(),
                a_priori_epsilon: res.a_priori_epsilon,
            },
            wall_time_seconds,
            trace: res.trace.as_ref().map(|t| TraceRecord {
                payoffs: t.payoffs.clone(),
                alice_lhs: t.bounds.alice_lhs,
                alice_rhs: t.bounds.alice_rhs,
                bob_lhs: t.bounds.bob_lhs,
                bob_rhs: t.bounds.bob_rhs,
            }),
        }
    }

    pub fn to_value(&self) -> Value {
        let mut map = document("result", self.n, self.m);
        map.insert("input_digest".into(), json!(self.input_digest));
        map.insert("rho".into(), write_herm(self.rho.as_herm()));
        map.insert("sigma".into(), write_herm(self.sigma.as_herm()));
        map.insert("value_lo".into(), json!(self.value_lo));
        map.insert("value_mid".into(), json!(self.value_mid));
        map.insert("value_hi".into(), json!(self.value_hi));
        map.insert("gap".into(), json!(self.gap));
        map.insert("certified_epsilon".into(), json!(self.certified_epsilon));
        map.insert("iterations".into(), json!(self.iterations));
        let p = &self.params;
        let mut params = json!({
            "epsilon": p.epsilon,
            "epsilon_iterated": p.epsilon_iterated,
            "mu": p.mu,
            "mu_override": p.mu_override,
            "iter_override": p.iter_override,
            "guarantee_on_original": p.guarantee_on_original,
            "reduction": p.reduction,
        });
        if let Some(a) = p.a_priori_epsilon {
            params["a_priori_epsilon"] = json!(a);
        }
        map.insert("params".into(), params);
        map.insert("wall_time_seconds".into(), json!(self.wall_time_seconds));
        if let Some(t) = &self.trace {
            map.insert(
                "trace".into(),
                json!({
                    "payoffs": t.payoffs,
                    "alice_lhs": t.alice_lhs,
                    "alice_rhs": t.alice_rhs,
                    "bob_lhs": t.bob_lhs,
                    "bob_rhs": t.bob_rhs,
                }),
            );
        }
        Value::Object(map)
    }

    pub fn to_canonical(&self) -> String {
        to_canonical_string(&self.to_value())
    }
}

fn parse_params(value: &Value) -> Result<ParamsRecord> {
    let f = Fields::new(value, "params")?;
    f.only(&[
        "epsilon",
        "epsilon_iterated",
        "mu",
        "mu_override",
        "iter_override",
        "guarantee_on_original",
        "reduction",
        "a_priori_epsilon",
    ])?;
    let reduction = f.str("reduction")?;
    if !["direct", "rescaled", "degenerate"].contains(&reduction) {
        return Err(field_err("params.reduction", format!("unknown reduction `{reduction}`")));
    }
    Ok(ParamsRecord {
        epsilon: f.f64("epsilon")?,
        epsilon_iterated: f.f64("epsilon_iterated")?,
        mu: f.f64("mu")?,
        mu_override: f.bool("mu_override")?,
        iter_override: f.bool("iter_override")?,
        guarantee_on_original: f.bool("guarantee_on_original")?,
        reduction: reduction.to_string(),
        a_priori_epsilon: if f.has("a_priori_epsilon") {
            Some(f.f64("a_priori_epsilon")?)
        } else {
            None
        },
    })
}

fn parse_trace(value: &Value) -> Result<TraceRecord> {
    let f = Fields::new(value, "trace")?;
    f.only(&["payoffs", "alice_lhs", "alice_rhs", "bob_lhs", "bob_rhs"])?;
    Ok(TraceRecord {
        payoffs: f.f64_array("payoffs")?,
        alice_lhs: f.f64("alice_lhs")?,
        alice_rhs: f.f64("alice_rhs")?,
        bob_lhs: f.f64("bob_lhs")?,
        bob_rhs: f.f64("bob_rhs")?,
    })
}

fn parse_result_fields(f: &Fields) -> Result<ResultFile> {
    f.only(&[
        "schema_version",
        "kind",
        "n",
        "m",
        "input_digest",
        "rho",
        "sigma",
        "value_lo",
        "value_mid",
        "value_hi",
        "gap",
        "certified_epsilon",
        "iterations",
        "params",
        "wall_time_seconds",
        "trace",
    ])?;
    let (n, m) = f.dims()?;
    let res = ResultFile {
        n,
        m,
        input_digest: f.str("input_digest")?.to_string(),
        rho: f.density("rho", n)?,
        sigma: f.density("sigma", m)?,
        value_lo: f.f64("value_lo")?,
        value_mid: f.f64("value_mid")?,
        value_hi: f.f64("value_hi")?,
        gap: f.f64("gap")?,
        certified_epsilon: f.f64("certified_epsilon")?,
        iterations: f.u64("iterations")?,
        params: parse_params(f.get("params")?)?,
        wall_time_seconds: f.f64("wall_time_seconds")?,
        trace: if f.has("trace") {
            Some(parse_trace(f.get("trace")?)?)
        } else {
            None
        },
    };
    if res.value_lo > res.value_mid + ORDER_SLACK || res.value_mid > res.value_hi + ORDER_SLACK {
        return Err(field_err("value_mid", "expected value_lo ≤ value_mid ≤ value_hi"));
    }
    Ok(res)
}

pub fn parse_result(bytes: &[u8]) -> Result<ResultFile> {
    let value = parse_json(bytes)?;
    let (f, kind) = header(&value)?;
    if kind != "result" {
        return Err(field_err("kind", format!("expected `result`, found `{kind}`")));
    }
    parse_result_fields(&f)
}

/// Either a candidate file or a result file; both carry `(ρ, σ)` and a
/// claimed accuracy.
#[derive(Debug, Clone)]
pub enum Claim {
    Candidate(Candidate),
    Result(Box<ResultFile>),
}

impl Claim {
    pub fn rho(&self) -> &DensityMatrix {
        match self {
            Claim::Candidate(c) => &c.rho,
            Claim::Result(r) => &r.rho,
        }
    }

    pub fn sigma(&self) -> &DensityMatrix {
        match self {
            Claim::Candidate(c) => &c.sigma,
            Claim::Result(r) => &r.sigma,
        }
    }

    /// The accuracy the file claims: `epsilon` for a candidate,
    /// `certified_epsilon` for a result.
    pub fn epsilon(&self) -> f64 {
        match self {
            Claim::Candidate(c) => c.epsilon,
            Claim::Result(r) => r.certified_epsilon,
        }
    }

    pub fn to_canonical(&self) -> String {
        match self {
            Claim::Candidate(c) => c.to_canonical(),
            Claim::Result(r) => r.to_canonical(),
        }
    }
}

pub fn parse_claim(bytes: &[u8]) -> Result<Claim> {
    let value = parse_json(bytes)?;
    let (f, kind) = header(&value)?;
    match kind {
        "candidate" => {
            f.only(&["schema_version", "kind", "n", "m", "rho", "sigma", "epsilon"])?;
            let (n, m) = f.dims()?;
            let epsilon = f.f64("epsilon")?;
            if epsilon < 0.0 {
                return Err(field_err("epsilon", "must be non-negative"));
            }
            Ok(Claim::Candidate(Candidate {
                n,
                m,
                rho: f.density("rho", n)?,
                sigma: f.density("sigma", m)?,
                epsilon,
            }))
        }
        "result" => Ok(Claim::Result(Box::new(parse_result_fields(&f)?))),
        other => Err(field_err(
            "kind",
            format!("expected `candidate` or `result`, found `{other}`"),
        )),
    }
}

// ---------------------------------------------------------------------------
// psdp results

#[derive(Debug, Clone)]
pub struct PsdpResultFile {
    pub n: usize,
    pub m: usize,
    pub input_digest: String,
    pub epsilon: f64,
    pub opt_estimate: f64,
    pub opt_lo: f64,
    pub opt_hi: f64,
    pub primal_y: HermMatrix,
    pub dual_x: HermMatrix,
    pub alpha: f64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub choi_norm: f64,
    pub iterations: u64,
    pub wall_time_seconds: f64,
}

impl PsdpResultFile {
    pub fn from_solve(
        input_digest: String,
        epsilon: f64,
        res: &PsdpResult,
        wall_time_seconds: f64,
    ) -> Self {
        PsdpResultFile {
            n: res.dual_x.dim(),
            m: res.primal_y.dim(),
            input_digest,
            epsilon,
            opt_estimate: res.opt_estimate,
            opt_lo: res.opt_lo,
            opt_hi: res.opt_hi,
            primal_y: res.primal_y.clone(),
            dual_x: res.dual_x.clone(),
            alpha: res.alpha,
            alpha_lo: res.alpha_lo,
            alpha_hi: res.alpha_hi,
            choi_norm: res.choi_norm,
            iterations: res.iterations as u64,
            wall_time_seconds,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut map = document("psdp-result", self.n, self.m);
        map.insert("input_digest".into(), json!(self.input_digest));
        map.insert("epsilon".into(), json!(self.epsilon));
        map.insert("opt_estimate".into(), json!(self.opt_estimate));
        map.insert("opt_lo".into(), json!(self.opt_lo));
        map.insert("opt_hi".into(), json!(self.opt_hi));
        map.insert("primal_y".into(), write_herm(&self.primal_y));
        map.insert("dual_x".into(), write_herm(&self.dual_x));
        map.insert("alpha".into(), json!(self.alpha));
        map.insert("alpha_lo".into(), json!(self.alpha_lo));
        map.insert("alpha_hi".into(), json!(self.alpha_hi));
        map.insert("choi_norm".into(), json!(self.choi_norm));
        map.insert("iterations".into(), json!(self.iterations));
        map.insert("wall_time_seconds".into(), json!(self.wall_time_seconds));
        Value::Object(map)
    }

    pub fn to_canonical(&self) -> String {
        to_canonical_string(&self.to_value())
    }
}

pub fn parse_psdp_result(bytes: &[u8]) -> Result<PsdpResultFile> {
    let value = parse_json(bytes)?;
    let (f, kind) = header(&value)?;
    if kind != "psdp-result" {
        return Err(field_err("kind", format!("expected `psdp-result`, found `{kind}`")));
    }
    f.only(&[
        "schema_version",
        "kind",
        "n",
        "m",
        "input_digest",
        "epsilon",
        "opt_estimate",
        "opt_lo",
        "opt_hi",
        "primal_y",
        "dual_x",
        "alpha",
        "alpha_lo",
        "alpha_hi",
        "choi_norm",
        "iterations",
        "wall_time_seconds",
    ])?;
    let (n, m) = f.dims()?;
    Ok(PsdpResultFile {
        n,
        m,
        input_digest: f.str("input_digest")?.to_string(),
        epsilon: f.f64("epsilon")?,
        opt_estimate: f.f64("opt_estimate")?,
        opt_lo: f.f64("opt_lo")?,
        opt_hi: f.f64("opt_hi")?,
        primal_y: f.herm("primal_y", m)?,
        dual_x: f.herm("dual_x", n)?,
        alpha: f.f64("alpha")?,
        alpha_lo: f.f64("alpha_lo")?,
        alpha_hi: f.f64("alpha_hi")?,
        choi_norm: f.f64("choi_norm")?,
        iterations: f.u64("iterations")?,
        wall_time_seconds: f.f64("wall_time_seconds")?,
    })
}
