//! Workspace file format: one JSON document holding named modules,
//! morphisms, local systems and monomials. Rationals are serialized as
//! `"p"` or `"p/q"` strings so exactness survives the round trip, and
//! all maps are ordered, so emitted output is byte-stable.

use ncdmod::local_system::{LocalSystemSpec, SystemBlock};
use ncdmod::matrix::Matrix;
use ncdmod::module::{GridIndex, NCModule, SliceData};
use ncdmod::morphism::NCMorphism;
use ncdmod::rat::{format_rat, parse_rat, Rat};
use ncdmod::spectrum::MonomialSpec;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(format_rat).collect(),
        }
    }

    pub fn to_matrix(&self, context: &str) -> Result<Matrix, String> {
        if self.entries.len() != self.rows * self.cols {
            return Err(format!(
                "{context}: matrix entry count {} does not match {}x{}",
                self.entries.len(),
                self.rows,
                self.cols
            ));
        }
        let entries = self
            .entries
            .iter()
            .map(|s| parse_rat(s).map_err(|e| format!("{context}: {e}")))
            .collect::<Result<Vec<Rat>, String>>()?;
        Ok(Matrix::new(self.rows, self.cols, entries))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SliceJson {
    pub index: Vec<String>,
    pub dim: usize,
    pub theta: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub var: BTreeMap<String, MatrixJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub can: BTreeMap<String, MatrixJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleJson {
    pub axes: usize,
    pub slices: Vec<SliceJson>,
}

fn parse_index(coords: &[String], context: &str) -> Result<GridIndex, String> {
    let rats = coords
        .iter()
        .map(|s| parse_rat(s).map_err(|e| format!("{context}: {e}")))
        .collect::<Result<Vec<Rat>, String>>()?;
    GridIndex::from_rats(rats).map_err(|e| format!("{context}: {e}"))
}

fn format_index(index: &GridIndex) -> Vec<String> {
    index.0.iter().map(|e| format_rat(e.value())).collect()
}

impl ModuleJson {
    pub fn from_module(module: &NCModule) -> Self {
        let slices = module
            .slices()
            .iter()
            .map(|(index, slice)| {
                let mut var = BTreeMap::new();
                let mut can = BTreeMap::new();
                for axis in 0..module.axes() {
                    if index.coord(axis).is_minus_one() {
                        let key = (axis + 1).to_string();
                        var.insert(key.clone(), MatrixJson::from_matrix(&module.var(axis, index)));
                        can.insert(key, MatrixJson::from_matrix(&module.can(axis, index)));
                    }
                }
                SliceJson {
                    index: format_index(index),
                    dim: slice.dim,
                    theta: slice.theta.iter().map(MatrixJson::from_matrix).collect(),
                    var,
                    can,
                }
            })
            .collect();
        ModuleJson { axes: module.axes(), slices }
    }

    pub fn to_module(&self, name: &str) -> Result<NCModule, String> {
        let mut slices = BTreeMap::new();
        let mut var = BTreeMap::new();
        let mut can = BTreeMap::new();
        for (i, slice) in self.slices.iter().enumerate() {
            let context = format!("module {name}, slice {i}");
            if slice.index.len() != self.axes {
                return Err(format!("{context}: index length != axes"));
            }
            let index = parse_index(&slice.index, &context)?;
            if slices.contains_key(&index) {
                return Err(format!("{context}: duplicate grid index"));
            }
            if slice.theta.len() != self.axes {
                return Err(format!("{context}: need one theta per axis"));
            }
            let theta = slice
                .theta
                .iter()
                .map(|m| m.to_matrix(&context))
                .collect::<Result<Vec<Matrix>, String>>()?;
            for (key, matrix) in &slice.var {
                let axis = parse_axis(key, self.axes, &context)?;
                if !index.coord(axis).is_minus_one() {
                    return Err(format!("{context}: var on axis {key} needs coordinate -1"));
                }
                var.insert((axis, index.clone()), matrix.to_matrix(&context)?);
            }
            for (key, matrix) in &slice.can {
                let axis = parse_axis(key, self.axes, &context)?;
                if !index.coord(axis).is_minus_one() {
                    return Err(format!("{context}: can on axis {key} needs coordinate -1"));
                }
                can.insert((axis, index.clone()), matrix.to_matrix(&context)?);
            }
            slices.insert(index, SliceData { dim: slice.dim, theta });
        }
        Ok(NCModule::assemble(self.axes, slices, var, can))
    }
}

fn parse_axis(key: &str, axes: usize, context: &str) -> Result<usize, String> {
    let one_based: usize =
        key.parse().map_err(|_| format!("{context}: bad axis key {key:?}"))?;
    if one_based == 0 || one_based > axes {
        return Err(format!("{context}: axis {one_based} out of range 1..={axes}"));
    }
    Ok(one_based - 1)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismMapJson {
    pub index: Vec<String>,
    pub matrix: MatrixJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismJson {
    pub source: String,
    pub target: String,
    pub maps: Vec<MorphismMapJson>,
}

impl MorphismJson {
    pub fn to_morphism(
        &self,
        name: &str,
        modules: &BTreeMap<String, NCModule>,
    ) -> Result<NCMorphism, String> {
        let source = modules
            .get(&self.source)
            .ok_or_else(|| format!("morphism {name}: unknown source {:?}", self.source))?;
        let target = modules
            .get(&self.target)
            .ok_or_else(|| format!("morphism {name}: unknown target {:?}", self.target))?;
        let mut maps = BTreeMap::new();
        for (i, entry) in self.maps.iter().enumerate() {
            let context = format!("morphism {name}, map {i}");
            let index = parse_index(&entry.index, &context)?;
            maps.insert(index, entry.matrix.to_matrix(&context)?);
        }
        Ok(NCMorphism::new(source.clone(), target.clone(), maps))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockJson {
    pub alpha: Vec<String>,
    pub dim: usize,
    pub nilpotents: Vec<MatrixJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemJson {
    pub axes: usize,
    pub blocks: Vec<BlockJson>,
}

impl SystemJson {
    pub fn from_system(system: &LocalSystemSpec) -> Self {
        SystemJson {
            axes: system.axes,
            blocks: system
                .blocks
                .iter()
                .map(|b| BlockJson {
                    alpha: b.alpha.iter().map(format_rat).collect(),
                    dim: b.dim,
                    nilpotents: b.nilpotents.iter().map(MatrixJson::from_matrix).collect(),
                })
                .collect(),
        }
    }

    pub fn to_system(&self, name: &str) -> Result<LocalSystemSpec, String> {
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let context = format!("system {name}, block {i}");
                let alpha = b
                    .alpha
                    .iter()
                    .map(|s| parse_rat(s).map_err(|e| format!("{context}: {e}")))
                    .collect::<Result<Vec<Rat>, String>>()?;
                let nilpotents = b
                    .nilpotents
                    .iter()
                    .map(|m| m.to_matrix(&context))
                    .collect::<Result<Vec<Matrix>, String>>()?;
                Ok(SystemBlock { alpha, dim: b.dim, nilpotents })
            })
            .collect::<Result<Vec<SystemBlock>, String>>()?;
        Ok(LocalSystemSpec { axes: self.axes, blocks })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonomialJson {
    pub ambient_dim: usize,
    pub divisor_axes: usize,
    pub exponents: Vec<u32>,
}

impl MonomialJson {
    pub fn to_monomial(&self) -> MonomialSpec {
        MonomialSpec::new(self.ambient_dim, self.divisor_axes, self.exponents.clone())
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct WorkspaceJson {
    pub version: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<String, MorphismJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub systems: BTreeMap<String, SystemJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub monomials: BTreeMap<String, MonomialJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
}

/// A workspace with everything parsed; objects are still unvalidated
/// (the `validate` command reports violations, other commands refuse
/// invalid objects on use).
pub struct Workspace {
    pub modules: BTreeMap<String, NCModule>,
    pub morphisms: BTreeMap<String, NCMorphism>,
    pub systems: BTreeMap<String, LocalSystemSpec>,
    pub monomials: BTreeMap<String, MonomialSpec>,
}

impl Workspace {
    pub fn parse(text: &str) -> Result<Workspace, String> {
        let json: WorkspaceJson =
            serde_json::from_str(text).map_err(|e| format!("bad workspace JSON: {e}"))?;
        if json.version != FORMAT_VERSION {
            return Err(format!(
                "unsupported format version {} (expected {FORMAT_VERSION})",
                json.version
            ));
        }
        let mut modules = BTreeMap::new();
        for (name, module_json) in &json.modules {
            modules.insert(name.clone(), module_json.to_module(name)?);
        }
        let mut morphisms = BTreeMap::new();
        for (name, morphism_json) in &json.morphisms {
            morphisms.insert(name.clone(), morphism_json.to_morphism(name, &modules)?);
        }
        let mut systems = BTreeMap::new();
        for (name, system_json) in &json.systems {
            systems.insert(name.clone(), system_json.to_system(name)?);
        }
        let monomials = json
            .monomials
            .iter()
            .map(|(name, m)| (name.clone(), m.to_monomial()))
            .collect();
        Ok(Workspace { modules, morphisms, systems, monomials })
    }
}

/// Workspace document holding computed result modules, reloadable as
/// input for further invocations.
pub fn results_document(
    operation: &str,
    input: &str,
    results: &[(String, &NCModule)],
) -> WorkspaceJson {
    WorkspaceJson {
        version: FORMAT_VERSION,
        modules: results
            .iter()
            .map(|(name, module)| (name.clone(), ModuleJson::from_module(module)))
            .collect(),
        operation: Some(operation.to_string()),
        input: Some(input.to_string()),
        ..Default::default()
    }
}
