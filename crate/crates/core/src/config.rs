//! JSON configuration files.
//!
//! ```json
//! {
//!   "version": "1",
//!   "nodes": [{"name": "a", "read_cap": 4000, "write_cap": 2000, "latency_s": 1}],
//!   "reads": "a*b + c",
//!   "read_fraction": {"0.9": "10/470", "0.1": "460/470"}
//! }
//! ```
//!
//! Numbers may be JSON numbers or strings holding a decimal or a fraction;
//! either way they are read exactly.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::model::{Node, QuorumSystem, Workload};
use crate::rational::{self, Rational};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    version: Option<Value>,
    nodes: Vec<RawNode>,
    reads: Option<String>,
    writes: Option<String>,
    read_fraction: Option<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    name: String,
    read_cap: Option<Value>,
    write_cap: Option<Value>,
    latency_s: Option<Value>,
}

/// A parsed configuration file.
#[derive(Clone, Debug)]
pub struct Config {
    pub nodes: Vec<Node>,
    pub reads: Option<Expr>,
    pub writes: Option<Expr>,
    pub workload: Workload,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Config> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if let Some(version) = &raw.version {
            let ok = match version {
                Value::String(s) => s == "1",
                Value::Number(n) => n.as_u64() == Some(1),
                _ => false,
            };
            if !ok {
                return Err(Error::Config(format!("unsupported config version {version}")));
            }
        }
        if raw.nodes.is_empty() {
            return Err(Error::Config("`nodes` must list at least one node".into()));
        }
        let mut nodes = Vec::with_capacity(raw.nodes.len());
        for n in raw.nodes {
            let mut node = Node::new(n.name.clone());
            if let Some(v) = &n.read_cap {
                node.read_cap = number(v, &format!("read_cap of `{}`", n.name))?;
            }
            if let Some(v) = &n.write_cap {
                node.write_cap = number(v, &format!("write_cap of `{}`", n.name))?;
            }
            if let Some(v) = &n.latency_s {
                node.latency = number(v, &format!("latency_s of `{}`", n.name))?;
            }
            node.validate()?;
            nodes.push(node);
        }
        let reads = raw.reads.as_deref().map(str::parse::<Expr>).transpose()?;
        let writes = raw.writes.as_deref().map(str::parse::<Expr>).transpose()?;
        let workload = match &raw.read_fraction {
            None => return Err(Error::Config("missing `read_fraction`".into())),
            Some(Value::Object(map)) => {
                let mut points = BTreeMap::new();
                for (key, prob) in map {
                    let fraction = rational::parse_decimal(key)
                        .ok_or_else(|| Error::Config(format!("read fraction key `{key}` is not a number")))?;
                    let prob = number(prob, &format!("probability of read fraction {key}"))?;
                    if points.insert(fraction, prob).is_some() {
                        return Err(Error::Config(format!("read fraction {key} listed twice")));
                    }
                }
                Workload::new(points)?
            }
            Some(v) => Workload::read_fraction(number(v, "read_fraction")?)?,
        };
        Ok(Config {
            nodes,
            reads,
            writes,
            workload,
        })
    }

    pub fn from_path(path: &std::path::Path) -> Result<Config> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Config::from_json(&text)
    }

    /// The configured quorum system; at least one side must be given.
    pub fn quorum_system(&self) -> Result<QuorumSystem> {
        if self.reads.is_none() && self.writes.is_none() {
            return Err(Error::Config("config needs `reads` or `writes`".into()));
        }
        QuorumSystem::new(self.nodes.clone(), self.reads.clone(), self.writes.clone())
    }
}

fn number(value: &Value, what: &str) -> Result<Rational> {
    let parsed = match value {
        Value::Number(n) => rational::parse_decimal(&n.to_string()),
        Value::String(s) => rational::parse_decimal(s.trim()),
        _ => None,
    };
    parsed.ok_or_else(|| Error::Config(format!("{what} must be a number, got {value}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn full_config() {
        let c = Config::from_json(
            r#"{"version": "1",
                "nodes": [{"name": "a", "read_cap": 4000, "write_cap": "2000", "latency_s": 0.5},
                          {"name": "b"}],
                "reads": "a + b",
                "read_fraction": {"0.9": "1/4", "0.1": 0.75}}"#,
        )
        .unwrap();
        assert_eq!(c.nodes[0].read_cap, int(4000));
        assert_eq!(c.nodes[0].latency, ratio(1, 2));
        assert_eq!(c.nodes[1].write_cap, int(1));
        assert_eq!(c.workload.mean_read_fraction(), ratio(3, 10));
        let qs = c.quorum_system().unwrap();
        assert_eq!(qs.writes().to_string(), "a*b");
    }

    #[test]
    fn scalar_workload_and_defaults() {
        let c = Config::from_json(r#"{"nodes": [{"name": "a"}], "writes": "a", "read_fraction": 1}"#).unwrap();
        assert_eq!(c.workload.len(), 1);
        assert!(c.reads.is_none());
        assert!(c.quorum_system().is_ok());
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            r#"{"nodes": [], "reads": "a", "read_fraction": 1}"#,
            r#"{"nodes": [{"name": "a"}], "reads": "a", "read_fraction": 1.5}"#,
            r#"{"nodes": [{"name": "a"}], "reads": "a", "read_fraction": {"0.5": 0.4}}"#,
            r#"{"nodes": [{"name": "a"}], "reads": "a"}"#,
            r#"{"nodes": [{"name": "a", "read_cap": -1}], "reads": "a", "read_fraction": 1}"#,
            r#"{"nodes": [{"name": "a", "speed": 3}], "reads": "a", "read_fraction": 1}"#,
            r#"{"version": "2", "nodes": [{"name": "a"}], "reads": "a", "read_fraction": 1}"#,
            r#"{"nodes": [{"name": "a"}], "reads": "a", "read_fraction": "lots"}"#,
            "not json",
        ];
        for text in bad {
            assert!(Config::from_json(text).is_err(), "{text}");
        }
        let c = Config::from_json(r#"{"nodes": [{"name": "a"}], "read_fraction": 1}"#).unwrap();
        assert!(c.quorum_system().is_err());
        assert!(matches!(
            Config::from_json(r#"{"nodes": [{"name": "a"}], "reads": "a +", "read_fraction": 1}"#),
            Err(Error::Parse { .. })
        ));
    }
}
