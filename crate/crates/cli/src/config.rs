//! JSON job configuration and its resolution into library objects.

use serde::{Deserialize, Serialize};

use hvir::algebra::Convention;
use hvir::{GroupElement, GroupSpec, OrderSpec, QuadSurd, Scalar, TieBreak};

use crate::Format;

/// A configuration problem; rendered with the offending field.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn field_err(field: &str, msg: impl std::fmt::Display) -> ConfigError {
    ConfigError(format!("field `{field}`: {msg}"))
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub group: GroupConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleConfig>,
    #[serde(default)]
    pub window: WindowConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub probes: Vec<String>,
    #[serde(default)]
    pub params: ProbeParams,
    #[serde(default)]
    pub convention: Convention,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triples: Option<usize>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub rank: usize,
    /// Exact values of the generators; symbolic `b1, …, bn` if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real: Option<RealConfig>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RealConfig {
    pub d: u32,
    pub values: Vec<String>,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreakConfig {
    Reject,
    Lex,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OrderConfig {
    Lex {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        transform: Option<Vec<Vec<i64>>>,
    },
    Functional {
        /// Values in `Q[√d]`, e.g. `"sqrt2"`; the group's real data if absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tie_break: Option<TieBreakConfig>,
    },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleConfig {
    Intermediate {
        alpha: String,
        beta: String,
    },
    Verma {
        cdot: String,
        h: String,
    },
    Induced {
        alpha: String,
        beta: String,
        /// Either `b` and `g0`, or a primitive `level_functional`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b: Option<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        g0: Option<Vec<Vec<i64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        level_functional: Option<Vec<i64>>,
    },
    Trivial,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub box_radius: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    /// Radius of the PBW labels used for induced quotients.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_radius: Option<i64>,
    /// Largest label radius tried while waiting for stabilization.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_radius: Option<i64>,
    /// Levels of rank-one Gram determinants (discrete Verma probes).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray_base: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray_direction: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray_range: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ghw_basis: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone_depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gbar: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<Vec<i64>>,
}

pub fn parse_config(src: &str) -> Result<JobConfig, ConfigError> {
    serde_json::from_str(src).map_err(|e| ConfigError(format!("line {}, column {}: {e}", e.line(), e.column())))
}

pub fn scalar(field: &str, src: &str) -> Result<Scalar, ConfigError> {
    Scalar::parse(src).map_err(|e| field_err(field, e))
}

pub fn element(field: &str, coords: &[i64], n: usize) -> Result<GroupElement, ConfigError> {
    if coords.len() != n {
        return Err(field_err(field, format!("expected {n} coordinates, got {}", coords.len())));
    }
    Ok(GroupElement::new(coords.to_vec()))
}

impl JobConfig {
    pub fn group_spec(&self) -> Result<GroupSpec, ConfigError> {
        let n = self.group.rank;
        let mut g = match &self.group.generators {
            None => GroupSpec::symbolic(n).map_err(|e| field_err("group.rank", e))?,
            Some(vals) => {
                if vals.len() != n {
                    return Err(field_err(
                        "group.generators",
                        format!("expected {n} values, got {}", vals.len()),
                    ));
                }
                let vals = vals
                    .iter()
                    .enumerate()
                    .map(|(i, v)| scalar(&format!("group.generators[{i}]"), v))
                    .collect::<Result<Vec<_>, _>>()?;
                GroupSpec::with_values(vals).map_err(|e| field_err("group.generators", e))?
            }
        };
        if let Some(real) = &self.group.real {
            let vals = real
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| QuadSurd::parse(v, real.d).map_err(|e| field_err(&format!("group.real.values[{i}]"), e)))
                .collect::<Result<Vec<_>, _>>()?;
            g = g.with_real_data(real.d, vals).map_err(|e| field_err("group.real", e))?;
        }
        Ok(g)
    }

    pub fn order_spec(&self, group: &GroupSpec) -> Result<OrderSpec, ConfigError> {
        let n = group.rank();
        let order = match &self.order {
            None => OrderSpec::lex(n),
            Some(OrderConfig::Lex { transform: None }) => OrderSpec::lex(n),
            Some(OrderConfig::Lex { transform: Some(t) }) => {
                OrderSpec::lex_with(t.clone()).map_err(|e| field_err("order.transform", e))?
            }
            Some(OrderConfig::Functional { weights, d, tie_break }) => {
                let tb = match tie_break.unwrap_or(TieBreakConfig::Reject) {
                    TieBreakConfig::Reject => TieBreak::Reject,
                    TieBreakConfig::Lex => TieBreak::Lex,
                };
                match weights {
                    None => OrderSpec::from_real_data(group, tb).map_err(|e| field_err("order", e))?,
                    Some(w) => {
                        let d = d
                            .or(group.real_data().map(|r| r.d))
                            .ok_or_else(|| field_err("order.d", "missing"))?;
                        let w = w
                            .iter()
                            .enumerate()
                            .map(|(i, v)| {
                                QuadSurd::parse(v, d).map_err(|e| field_err(&format!("order.weights[{i}]"), e))
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        OrderSpec::functional(w, d, tb).map_err(|e| field_err("order.weights", e))?
                    }
                }
            }
        };
        if order.rank() != n {
            return Err(field_err("order", format!("rank {} does not match the group rank {n}", order.rank())));
        }
        Ok(order)
    }

    pub fn module(&self) -> Result<&ModuleConfig, ConfigError> {
        self.module.as_ref().ok_or_else(|| field_err("module", "missing"))
    }

    pub fn window_parts(&self, n: usize) -> Result<Vec<GroupElement>, ConfigError> {
        let parts = self
            .window
            .parts
            .as_ref()
            .ok_or_else(|| field_err("window.parts", "missing (required for Verma windows)"))?;
        parts
            .iter()
            .enumerate()
            .map(|(i, p)| element(&format!("window.parts[{i}]"), p, n))
            .collect()
    }
}

/// `"1,0;0,1"` → `[[1,0],[0,1]]`.
pub fn parse_parts(src: &str) -> Result<Vec<Vec<i64>>, ConfigError> {
    src.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split(',')
                .map(|c| c.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| ConfigError(format!("--window-parts: {e} in `{p}`")))
        })
        .collect()
}
