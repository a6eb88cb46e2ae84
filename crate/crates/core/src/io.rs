//! JSON formats.
//!
//! Games: `{"n": 3, "form": "game" | "mobius", "entries": {"1,2": "0.2"}}`.
//! Keys list players in increasing order, values are decimal or `p/q`
//! strings (plain JSON numbers are accepted too), and missing entries are 0.
//!
//! Orders: `{"n": 4, "k": 2, "sequence": ["2", "3", "2,4", ...]}`.
//!
//! Reports (atlas dumps, vertex lists, oracle summaries) are emitted with
//! keys in a fixed order and rationals as reduced fraction strings, so equal
//! inputs give byte-identical output.

use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer};
use serde_json::{json, Map, Value};

use crate::achievable::{FamilyAtlas, FamilyStatus};
use crate::corevert::{ConstraintSystem, VertexCertificate};
use crate::error::{Error, Result};
use crate::oracle::PolyhedronSummary;
use crate::orders::SubsetOrder;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::setfn::{inverse_mobius, mobius_transform, GameTable, MobiusVector};
use crate::subset::{GroundSet, Subset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GameForm {
    /// Entries are worths `v(A)`.
    #[default]
    Game,
    /// Entries are Möbius coefficients `m(A)`.
    Mobius,
}

impl GameForm {
    pub fn name(self) -> &'static str {
        match self {
            GameForm::Game => "game",
            GameForm::Mobius => "mobius",
        }
    }
}

/// Map entries in document order, so duplicates can be reported.
struct Entries(Vec<(String, Value)>);

impl<'de> Deserialize<'de> for Entries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = Entries;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping coalition keys to rationals")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Entries, A::Error> {
                let mut out = Vec::new();
                while let Some(entry) = map.next_entry::<String, Value>()? {
                    out.push(entry);
                }
                Ok(Entries(out))
            }
        }

        deserializer.deserialize_map(EntriesVisitor)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGame {
    n: usize,
    #[serde(default)]
    form: Option<String>,
    entries: Entries,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOrder {
    n: usize,
    k: usize,
    sequence: Vec<String>,
}

/// 1-based line of the first occurrence of `needle`, for error messages.
fn line_of(text: &str, needle: &str) -> Option<usize> {
    text.find(needle).map(|pos| text[..pos].matches('\n').count() + 1)
}

fn at_key(text: &str, key: &str, msg: String) -> Error {
    match line_of(text, &format!("\"{key}\"")) {
        Some(line) => Error::input(format!("line {line}: {msg}")),
        None => Error::input(msg),
    }
}

fn syntax(err: serde_json::Error) -> Error {
    Error::input(format!("line {} column {}: {err}", err.line(), err.column()))
}

fn rational_value(value: &Value) -> std::result::Result<Rational, String> {
    match value {
        Value::String(s) => parse_rational(s).map_err(|e| e.to_string()),
        Value::Number(num) => parse_rational(&num.to_string()).map_err(|e| e.to_string()),
        other => Err(format!("expected a rational string or number, found {other}")),
    }
}

/// Reads a game in either form and returns it with the form it was given in.
pub fn parse_game_with_form(text: &str) -> Result<(GameTable, GameForm)> {
    let raw: RawGame = serde_json::from_str(text).map_err(syntax)?;
    let form = match raw.form.as_deref() {
        None | Some("game") => GameForm::Game,
        Some("mobius") => GameForm::Mobius,
        Some(other) => {
            return Err(at_key(
                text,
                "form",
                format!("unknown form {other:?} (expected \"game\" or \"mobius\")"),
            ))
        }
    };
    let ground = GroundSet::new(raw.n).map_err(|e| at_key(text, "n", e.to_string()))?;
    let mut values = vec![Rational::default(); ground.size()];
    let mut seen = vec![false; ground.size()];
    for (key, value) in &raw.entries.0 {
        let s = Subset::parse_key(key, ground.n()).map_err(|e| at_key(text, key, e.to_string()))?;
        if std::mem::replace(&mut seen[s.index()], true) {
            return Err(at_key(text, key, format!("coalition {s} listed twice")));
        }
        let q = rational_value(value).map_err(|msg| at_key(text, key, msg))?;
        if s.is_empty() && q != Rational::default() {
            let what = match form {
                GameForm::Game => "v(∅)",
                GameForm::Mobius => "m(∅)",
            };
            return Err(at_key(
                text,
                key,
                format!("{what} must be 0, got {}", format_rational(&q)),
            ));
        }
        values[s.index()] = q;
    }
    let game = match form {
        GameForm::Game => GameTable::new(ground, values)?,
        GameForm::Mobius => inverse_mobius(&MobiusVector::new(ground, values)?),
    };
    Ok((game, form))
}

pub fn parse_game(text: &str) -> Result<GameTable> {
    parse_game_with_form(text).map(|(v, _)| v)
}

/// Nonempty coalitions mapped to rational strings, in binary order.
fn entry_map<'a>(items: impl Iterator<Item = (Subset, &'a Rational)>) -> Value {
    let map: Map<String, Value> = items
        .map(|(s, q)| (s.key(), Value::String(format_rational(q))))
        .collect();
    Value::Object(map)
}

/// A game in the requested form. The game form lists every coalition; the
/// Möbius form lists only nonzero coefficients.
pub fn game_to_value(v: &GameTable, form: GameForm) -> Value {
    let entries = match form {
        GameForm::Game => entry_map(v.ground().nonempty_subsets().map(|s| (s, v.value(s)))),
        GameForm::Mobius => {
            let m = mobius_transform(v);
            entry_map(m.support().collect::<Vec<_>>().into_iter())
        }
    };
    json!({ "n": v.n(), "form": form.name(), "entries": entries })
}

/// Coefficients of `m` on every coalition of at most `k` players.
pub fn mobius_to_value(m: &MobiusVector, k: usize) -> Value {
    entry_map(m.ground().bounded_subsets(k).map(|s| (s, m.coeff(s))))
}

pub fn parse_order(text: &str) -> Result<SubsetOrder> {
    let raw: RawOrder = serde_json::from_str(text).map_err(syntax)?;
    let ground = GroundSet::new(raw.n).map_err(|e| at_key(text, "n", e.to_string()))?;
    let sequence = raw
        .sequence
        .iter()
        .map(|key| Subset::parse_key(key, ground.n()).map_err(|e| at_key(text, key, e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    SubsetOrder::from_sequence(ground, raw.k, sequence).map_err(|e| match e {
        Error::Domain(msg) | Error::Input(msg) => at_key(text, "sequence", msg),
        other => other,
    })
}

pub fn order_to_value(order: &SubsetOrder) -> Value {
    json!({
        "n": order.ground().n(),
        "k": order.k(),
        "sequence": keys(order.sequence()),
    })
}

fn keys(sets: &[Subset]) -> Vec<String> {
    sets.iter().map(|s| s.key()).collect()
}

/// One record per centre, in the order's sequence.
pub fn atlas_to_value(atlas: &FamilyAtlas) -> Value {
    let families: Vec<Value> = atlas
        .families()
        .iter()
        .map(|f| {
            json!({
                "center": f.center().key(),
                "members": keys(f.members()),
                "top": f.top().map(|t| t.key()),
                "lattice": f.is_lattice(),
                "empty": f.status() == FamilyStatus::Empty,
            })
        })
        .collect();
    let mut out = order_to_value(atlas.order());
    out["families"] = Value::Array(families);
    out
}

pub fn certificate_to_value(cert: &VertexCertificate) -> Value {
    let mut out = json!({
        "mobius": mobius_to_value(&cert.point, cert.k),
        "tight": cert.tight_tags.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "rank": cert.rank,
        "vertex": cert.is_vertex,
    });
    if !cert.feasible {
        out["violated"] = Value::String(cert.violated.map(|t| t.to_string()).unwrap_or_default());
    }
    out
}

pub fn certificates_to_value(certs: &[VertexCertificate]) -> Value {
    Value::Array(certs.iter().map(certificate_to_value).collect())
}

/// A point or direction of `system`: a Möbius map when the system comes from
/// a game, a plain array otherwise.
pub fn coords_to_value(system: &ConstraintSystem, coords: &[Rational]) -> Value {
    match system.ground() {
        Some(_) => Value::Object(
            system
                .vars()
                .iter()
                .zip(coords)
                .map(|(s, q)| (s.key(), Value::String(format_rational(q))))
                .collect(),
        ),
        None => Value::Array(coords.iter().map(|q| Value::String(format_rational(q))).collect()),
    }
}

pub fn rays_to_value(system: &ConstraintSystem, rays: &[Vec<Rational>]) -> Value {
    Value::Array(rays.iter().map(|r| coords_to_value(system, r)).collect())
}

pub fn summary_to_value(system: &ConstraintSystem, summary: &PolyhedronSummary) -> Value {
    json!({
        "feasible": summary.feasible,
        "bounded": summary.bounded,
        "vertices": summary.vertices.iter().map(|v| coords_to_value(system, &v.point)).collect::<Vec<_>>(),
        "rays": rays_to_value(system, &summary.rays),
    })
}

/// Pretty JSON text with a trailing newline.
pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}
