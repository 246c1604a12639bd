//! The `.wz` manifest format: `[section]` headers followed by `key = value`
//! lines. `#` starts a comment.
//!
//! ```text
//! [field]
//! p = 3
//! a = 1
//!
//! [variety main]
//! kind = projective
//! vars = x, y, z
//! eq = y^2*z - x^3 - x*z^2 - z^3
//! ```

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;
use wzeta::expr::{parse_poly, ExprError};
use wzeta::ff::{FqElem, FqField};
use wzeta::geom::{GeomError, PatchMap, VarietySpec};
use wzeta::mpoly::IntMPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ManifestError {
    #[error("line {line}, column {col}: expected {expected}")]
    Parse { line: usize, col: usize, expected: String },
    #[error("line {line}, column {col}: unbound variable {name}")]
    UnboundVariable { line: usize, col: usize, name: String },
    #[error("line {line}: equation of projective variety {variety} is not homogeneous")]
    NonHomogeneous { line: usize, variety: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

/// A value with the position of its first character.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Located {
    text: String,
    line: usize,
    col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarietyKind {
    Affine,
    Projective,
    Point,
    Product,
    Union,
    Translate,
}

#[derive(Clone, Debug)]
struct VarietyBlock {
    line: usize,
    kind: VarietyKind,
    vars: Vec<String>,
    eqs: Vec<Located>,
    parts: Vec<Located>,
    curve: Option<Located>,
    ambient: Vec<Located>,
    slot: Option<usize>,
    points: BTreeMap<usize, Located>,
}

#[derive(Clone, Debug)]
pub struct ActionBlock {
    pub line: usize,
    pub variety: String,
    pub order: usize,
    pub free: bool,
    maps: Vec<(String, Located)>,
}

/// A parsed manifest with every variety resolved.
#[derive(Clone, Debug)]
pub struct Manifest {
    pub field: FqField,
    /// Varieties in declaration order.
    pub varieties: Vec<(String, VarietySpec)>,
    pub action: Option<ResolvedAction>,
    pub declarations: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct ResolvedAction {
    pub variety: String,
    pub order: usize,
    pub free: bool,
    /// Part names of the product and their maps.
    pub slots: Vec<(String, Option<PatchMap>)>,
}

impl Manifest {
    pub fn get(&self, name: &str) -> Option<&VarietySpec> {
        self.varieties.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// `main` if present, else the first variety.
    pub fn main(&self) -> Option<(&str, &VarietySpec)> {
        self.varieties
            .iter()
            .find(|(n, _)| n == "main")
            .or(self.varieties.first())
            .map(|(n, v)| (n.as_str(), v))
    }

    pub fn declared(&self, key: &str) -> Option<&[String]> {
        self.declarations.get(key).map(|v| v.as_slice())
    }
}

fn invalid(line: usize, message: impl Into<String>) -> ManifestError {
    ManifestError::Invalid { line, message: message.into() }
}

fn expected(line: usize, col: usize, what: &str) -> ManifestError {
    ManifestError::Parse { line, col, expected: what.to_string() }
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Splits on `sep`, keeping the column of every piece.
fn split_located(v: &Located, sep: char) -> Vec<Located> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in v.text.char_indices().chain(std::iter::once((v.text.len(), sep))) {
        if c == sep {
            let raw = &v.text[start..i];
            let lead = raw.len() - raw.trim_start().len();
            out.push(Located { text: raw.trim().to_string(), line: v.line, col: v.col + start + lead });
            start = i + 1;
        }
    }
    out
}

fn names(v: &Located) -> Result<Vec<Located>, ManifestError> {
    let out = split_located(v, ',');
    for n in &out {
        if !is_name(&n.text) {
            return Err(expected(n.line, n.col, "a name"));
        }
    }
    Ok(out)
}

fn integer<T: std::str::FromStr>(v: &Located, what: &str) -> Result<T, ManifestError> {
    v.text.parse().map_err(|_| expected(v.line, v.col, what))
}

fn expr(v: &Located, coords: &[&str]) -> Result<IntMPoly, ManifestError> {
    parse_poly(&v.text, coords).map_err(|e| match e {
        ExprError::Expected { col, expected: what } => expected(v.line, v.col + col - 1, &what),
        ExprError::UnboundVariable { col, name } => ManifestError::UnboundVariable { line: v.line, col: v.col + col - 1, name },
    })
}

enum Section {
    None,
    Field,
    Variety(String),
    Action,
    Declare,
}

/// Parses and resolves a manifest.
pub fn parse_manifest(text: &str) -> Result<Manifest, ManifestError> {
    let mut p: Option<Located> = None;
    let mut a: Option<Located> = None;
    let mut field_line = None;
    let mut blocks: Vec<(String, VarietyBlock)> = Vec::new();
    let mut action: Option<ActionBlock> = None;
    let mut declarations: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut section = Section::None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let inner = rest.strip_suffix(']').ok_or_else(|| expected(line, indent + trimmed.len() + 1, "']'"))?;
            let mut words = inner.split_whitespace();
            section = match (words.next(), words.next(), words.next()) {
                (Some("field"), None, _) => {
                    if field_line.is_some() {
                        return Err(invalid(line, "duplicate [field] block"));
                    }
                    field_line = Some(line);
                    Section::Field
                }
                (Some("variety"), Some(name), None) if is_name(name) => {
                    if blocks.iter().any(|(n, _)| n == name) {
                        return Err(invalid(line, format!("duplicate variety {name}")));
                    }
                    blocks.push((
                        name.to_string(),
                        VarietyBlock {
                            line,
                            kind: VarietyKind::Projective,
                            vars: Vec::new(),
                            eqs: Vec::new(),
                            parts: Vec::new(),
                            curve: None,
                            ambient: Vec::new(),
                            slot: None,
                            points: BTreeMap::new(),
                        },
                    ));
                    Section::Variety(name.to_string())
                }
                (Some("action"), None, _) => {
                    if action.is_some() {
                        return Err(invalid(line, "duplicate [action] block"));
                    }
                    action = Some(ActionBlock { line, variety: String::new(), order: 0, free: false, maps: Vec::new() });
                    Section::Action
                }
                (Some("declare"), None, _) => Section::Declare,
                _ => return Err(expected(line, indent + 2, "field, variety NAME, action or declare")),
            };
            continue;
        }
        let eq = content.find('=').ok_or_else(|| expected(line, indent + trimmed.len() + 1, "'='"))?;
        let key = content[..eq].trim();
        let raw_value = &content[eq + 1..];
        let lead = raw_value.len() - raw_value.trim_start().len();
        let value = Located { text: raw_value.trim().to_string(), line, col: eq + 2 + lead };
        let key_col = indent + 1;
        match &section {
            Section::None => return Err(expected(line, key_col, "a [section] header")),
            Section::Field => match key {
                "p" => p = Some(value),
                "a" => a = Some(value),
                _ => return Err(expected(line, key_col, "p or a")),
            },
            Section::Variety(name) => {
                let b = &mut blocks.iter_mut().find(|(n, _)| n == name).unwrap().1;
                match key {
                    "kind" => {
                        b.kind = match value.text.as_str() {
                            "affine" => VarietyKind::Affine,
                            "projective" => VarietyKind::Projective,
                            "point" => VarietyKind::Point,
                            "product" => VarietyKind::Product,
                            "union" => VarietyKind::Union,
                            "translate" => VarietyKind::Translate,
                            _ => return Err(expected(line, value.col, "affine, projective, point, product, union or translate")),
                        }
                    }
                    "vars" => b.vars = names(&value)?.into_iter().map(|l| l.text).collect(),
                    "eq" => b.eqs.push(value),
                    "parts" => b.parts = names(&value)?,
                    "curve" => b.curve = Some(value),
                    "ambient" => b.ambient = names(&value)?,
                    "slot" => b.slot = Some(integer(&value, "a slot index")?),
                    _ => {
                        if let Some(j) = key.strip_prefix("point.") {
                            let j: usize = j.parse().map_err(|_| expected(line, key_col + 6, "a slot index"))?;
                            b.points.insert(j, value);
                        } else {
                            return Err(expected(line, key_col, "kind, vars, eq, parts, curve, ambient, slot or point.N"));
                        }
                    }
                }
            }
            Section::Action => {
                let act = action.as_mut().unwrap();
                match key {
                    "variety" => act.variety = value.text,
                    "order" => act.order = integer(&value, "a positive integer")?,
                    "free" => {
                        act.free = match value.text.as_str() {
                            "true" => true,
                            "false" => false,
                            _ => return Err(expected(line, value.col, "true or false")),
                        }
                    }
                    _ => match key.strip_prefix("map.") {
                        Some(slot) if is_name(slot) => act.maps.push((slot.to_string(), value)),
                        _ => return Err(expected(line, key_col, "variety, order, free or map.NAME")),
                    },
                }
            }
            Section::Declare => {
                declarations.insert(key.to_string(), value.text.split(',').map(|s| s.trim().to_string()).collect());
            }
        }
    }

    let field_line = field_line.ok_or_else(|| invalid(1, "missing [field] block"))?;
    let p = p.ok_or_else(|| invalid(field_line, "missing p"))?;
    let p_val: u64 = integer(&p, "a prime")?;
    let a_val: u32 = match &a {
        Some(a) => integer(a, "an extension degree")?,
        None => 1,
    };
    let field = FqField::new(p_val, a_val).map_err(|e| invalid(field_line, e.to_string()))?;

    let mut res = Resolver { field: &field, blocks: &blocks, done: HashMap::new(), active: HashSet::new() };
    let mut varieties = Vec::new();
    for (name, b) in &blocks {
        varieties.push((name.clone(), res.resolve(name, b.line)?));
    }
    let action = match action {
        Some(act) => Some(resolve_action(&act, &blocks, &varieties)?),
        None => None,
    };
    for (key, vals) in &declarations {
        if key == "theta" || key == "smooth-affine-complement" {
            for v in vals {
                if !blocks.iter().any(|(n, _)| n == v) {
                    return Err(invalid(1, format!("declaration {key} names unknown variety {v}")));
                }
            }
        }
    }
    Ok(Manifest { field, varieties, action, declarations })
}

struct Resolver<'a> {
    field: &'a FqField,
    blocks: &'a [(String, VarietyBlock)],
    done: HashMap<String, VarietySpec>,
    active: HashSet<String>,
}

fn geom_err(line: usize, e: GeomError) -> ManifestError {
    invalid(line, e.to_string())
}

impl Resolver<'_> {
    fn resolve(&mut self, name: &str, line: usize) -> Result<VarietySpec, ManifestError> {
        if let Some(v) = self.done.get(name) {
            return Ok(v.clone());
        }
        let b = &self.blocks.iter().find(|(n, _)| n == name).ok_or_else(|| invalid(line, format!("unknown variety {name}")))?.1;
        if !self.active.insert(name.to_string()) {
            return Err(invalid(line, format!("variety {name} refers to itself")));
        }
        let coords: Vec<&str> = b.vars.iter().map(|s| s.as_str()).collect();
        let v = match b.kind {
            VarietyKind::Affine | VarietyKind::Projective => {
                if coords.is_empty() && b.kind == VarietyKind::Projective {
                    return Err(invalid(b.line, format!("variety {name} has no vars")));
                }
                let eqs = b.eqs.iter().map(|e| expr(e, &coords)).collect::<Result<Vec<_>, _>>()?;
                if b.kind == VarietyKind::Affine {
                    VarietySpec::affine(self.field, &coords, eqs).map_err(|e| geom_err(b.line, e))?
                } else {
                    VarietySpec::projective(self.field, &coords, eqs).map_err(|e| match e {
                        GeomError::NonHomogeneous { index } => {
                            ManifestError::NonHomogeneous { line: b.eqs[index].line, variety: name.to_string() }
                        }
                        e => geom_err(b.line, e),
                    })?
                }
            }
            VarietyKind::Point => VarietySpec::point(self.field),
            VarietyKind::Product | VarietyKind::Union => {
                if b.parts.is_empty() {
                    return Err(invalid(b.line, format!("variety {name} needs parts")));
                }
                let parts = b.parts.iter().map(|p| self.resolve(&p.text, p.line)).collect::<Result<Vec<_>, _>>()?;
                if b.kind == VarietyKind::Product {
                    VarietySpec::product(parts)
                } else {
                    VarietySpec::union(parts)
                }
                .map_err(|e| geom_err(b.line, e))?
            }
            VarietyKind::Translate => {
                let curve = b.curve.as_ref().ok_or_else(|| invalid(b.line, format!("variety {name} needs a curve")))?;
                let curve_spec = self.resolve(&curve.text, curve.line)?;
                let slot = b.slot.ok_or_else(|| invalid(b.line, format!("variety {name} needs a slot")))?;
                let mut ambient = Vec::new();
                let mut points = Vec::new();
                for (j, amb) in b.ambient.iter().enumerate() {
                    ambient.push(self.resolve(&amb.text, amb.line)?);
                    if j == slot {
                        points.push(Vec::new());
                        continue;
                    }
                    let loc = b.points.get(&j).ok_or_else(|| invalid(b.line, format!("variety {name} needs point.{j}")))?;
                    points.push(
                        split_located(loc, ',')
                            .iter()
                            .map(|c| element(self.field, c))
                            .collect::<Result<Vec<_>, _>>()?,
                    );
                }
                VarietySpec::translate_embed(curve_spec, ambient, slot, points).map_err(|e| geom_err(b.line, e))?
            }
        };
        self.active.remove(name);
        self.done.insert(name.to_string(), v.clone());
        Ok(v)
    }
}

/// A field element written as an expression in `g`.
fn element(field: &FqField, v: &Located) -> Result<FqElem, ManifestError> {
    let f = expr(v, &[])?;
    field.eval(&f, &[]).map_err(|e| invalid(v.line, e.to_string()))
}

fn resolve_action(
    act: &ActionBlock,
    blocks: &[(String, VarietyBlock)],
    varieties: &[(String, VarietySpec)],
) -> Result<ResolvedAction, ManifestError> {
    if act.order == 0 {
        return Err(invalid(act.line, "action needs order >= 1"));
    }
    let (_, target) = blocks
        .iter()
        .find(|(n, _)| *n == act.variety)
        .ok_or_else(|| invalid(act.line, format!("action acts on unknown variety '{}'", act.variety)))?;
    let slot_names: Vec<String> = match target.kind {
        VarietyKind::Product => target.parts.iter().map(|p| p.text.clone()).collect(),
        VarietyKind::Affine | VarietyKind::Projective => vec![act.variety.clone()],
        _ => return Err(invalid(act.line, "actions need a product or a single variety")),
    };
    for (slot, loc) in &act.maps {
        if !slot_names.contains(slot) {
            return Err(invalid(loc.line, format!("map.{slot} does not name a factor of {}", act.variety)));
        }
    }
    let mut slots = Vec::new();
    for s in &slot_names {
        let map = match act.maps.iter().find(|(n, _)| n == s) {
            None => None,
            Some((_, loc)) => {
                let spec = &varieties.iter().find(|(n, _)| n == s).unwrap().1;
                let factor = spec.as_factor().ok_or_else(|| invalid(loc.line, format!("{s} is not a single variety")))?;
                let coords: Vec<&str> = factor.coords.iter().map(|c| c.as_str()).collect();
                let mut patches = Vec::new();
                for patch in split_located(loc, ';') {
                    let images = split_located(&patch, ',').iter().map(|e| expr(e, &coords)).collect::<Result<Vec<_>, _>>()?;
                    if images.len() != coords.len() {
                        return Err(expected(patch.line, patch.col, &format!("{} coordinate images", coords.len())));
                    }
                    patches.push(images);
                }
                Some(PatchMap { patches })
            }
        };
        slots.push((s.clone(), map));
    }
    Ok(ResolvedAction { variety: act.variety.clone(), order: act.order, free: act.free, slots })
}
