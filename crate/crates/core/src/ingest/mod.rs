//! Building instances from XML documents: element trees, the edge-table
//! view, canonical subtree serialization, sizes, workloads and cost models.

mod files;
mod workload;
mod xml;

pub use files::{
    instance_from_json, instance_to_json, load_cost_entries, load_instance, load_workload,
    save_instance, write_edge_table,
};
pub use workload::{attach_workload, CostEntry, CostModel, WorkloadEntry};
pub use xml::{compute_sizes, parse_xml, serialize_subtree, EdgeRow, XmlElement, XmlTree};

use crate::error::Result;
use crate::model::Instance;

/// Parse, size and cost a document in one step.
pub fn ingest_document(
    document: &[u8],
    workload: &[WorkloadEntry],
    cost_model: &CostModel,
    budget: u64,
) -> Result<(Instance, XmlTree)> {
    let xml = compute_sizes(parse_xml(document)?);
    let tree = attach_workload(&xml, workload, cost_model)?;
    Ok((Instance::new(tree, budget), xml))
}
