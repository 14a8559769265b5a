use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::workload::{CostEntry, WorkloadEntry};
use super::xml::EdgeRow;
use crate::error::Result;
use crate::model::{AdNode, AdTree, Instance, SizeCheck};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    budget: u64,
    nodes: Vec<AdNode>,
}

/// Parses and validates an instance document. Size monotonicity is only
/// logged, since generated and reduced instances break it on purpose.
pub fn instance_from_json(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let tree = AdTree::new(file.nodes, SizeCheck::Lenient)?;
    Ok(Instance::new(tree, file.budget))
}

/// Canonical form: pretty-printed, nodes in ascending id order, trailing newline.
pub fn instance_to_json(inst: &Instance) -> Result<String> {
    let mut nodes = inst.tree.nodes().to_vec();
    nodes.sort_by_key(|n| n.id);
    let mut text = serde_json::to_string_pretty(&InstanceFile {
        budget: inst.budget,
        nodes,
    })?;
    text.push('\n');
    Ok(text)
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    instance_from_json(&std::fs::read_to_string(path)?)
}

pub fn save_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, instance_to_json(inst)?)?;
    Ok(())
}

pub fn load_workload(path: impl AsRef<Path>) -> Result<Vec<WorkloadEntry>> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

pub fn load_cost_entries(path: impl AsRef<Path>) -> Result<Vec<CostEntry>> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Writes `ID,parentID,name,content`; absent values become empty fields.
pub fn write_edge_table<W: Write>(rows: &[EdgeRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
