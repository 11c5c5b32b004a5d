//! Punctured cubes, isomax undercategories and the labeled decomposition
//! diagrams of dispersible spaces.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::json;

use crate::dispersion::{thomason_heights, Height};
use crate::error::{PrismError, Result};
use crate::flagged::FlaggedPriestley;
use crate::liegroups::{factor_label, family_label, flagged_snapshot, GroupId, Snapshot};

/// A nonempty subset of `{0, …, n}`, stored as a bit mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Subset(u32);

impl Subset {
    pub fn new(elements: &[u32]) -> Option<Self> {
        let mask = elements.iter().try_fold(0u32, |m, &e| (e < 32).then(|| m | (1 << e)))?;
        (mask != 0).then_some(Subset(mask))
    }

    pub fn singleton(i: u32) -> Self {
        Subset(1 << i)
    }

    pub fn elements(self) -> Vec<u32> {
        (0..32).filter(|i| self.0 & (1 << i) != 0).collect()
    }

    pub fn top(self) -> u32 {
        31 - self.0.leading_zeros()
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, j: u32) -> bool {
        self.0 & (1 << j) != 0
    }

    pub fn with(self, j: u32) -> Self {
        Subset(self.0 | (1 << j))
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Shortlex: by size, then lexicographically on the sorted elements.
    fn sort_key(self) -> (u32, Vec<u32>) {
        (self.len(), self.elements())
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Subset {
    /// Elements written without separators, as in `02`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.elements() {
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Dimension ℓ of the isomax undercategory of `phi`, which is the cube `[1]^ℓ`.
pub fn isomax_dim(phi: Subset) -> u32 {
    phi.top() + 1 - phi.len()
}

/// The isomax undercategory: supersets of `phi` with the same maximum.
pub fn isomax_undercategory(phi: Subset) -> Vec<Subset> {
    let m = phi.top();
    let free: Vec<u32> = (0..m).filter(|&i| !phi.contains(i)).collect();
    let mut out: Vec<Subset> = (0u32..1 << free.len())
        .map(|bits| {
            free.iter()
                .enumerate()
                .filter(|(i, _)| bits & (1 << i) != 0)
                .fold(phi, |s, (_, &j)| s.with(j))
        })
        .collect();
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Projection(u32),
    Diagonal,
    Laxness(u32),
}

impl EdgeKind {
    pub fn kind(self) -> &'static str {
        match self {
            EdgeKind::Projection(_) => "projection",
            EdgeKind::Diagonal => "diagonal",
            EdgeKind::Laxness(_) => "laxness",
        }
    }

    /// Change of isomax dimension along the edge.
    pub fn dim_change(self) -> i64 {
        match self {
            EdgeKind::Projection(_) => -1,
            EdgeKind::Diagonal => 0,
            EdgeKind::Laxness(z) => z as i64,
        }
    }
}

/// Kind of the edge `phi → phi ∪ {j}`.
pub fn classify_edge(phi: Subset, j: u32) -> Result<EdgeKind> {
    if phi.contains(j) {
        return Err(PrismError::InvalidArgument(format!("{j} already lies in {phi}")));
    }
    let m = phi.top();
    Ok(if j < m {
        EdgeKind::Projection(j)
    } else if j == m + 1 {
        EdgeKind::Diagonal
    } else {
        EdgeKind::Laxness(j - m - 1)
    })
}

/// All nonempty subsets of `{0, …, n}` in shortlex order.
pub fn punctured_cube(n: u32) -> Vec<Subset> {
    let mut out: Vec<Subset> = (1u32..1 << (n + 1)).map(Subset).collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduleStep {
    pub stratum: u32,
    pub residual: Vec<u32>,
    pub functor: String,
    pub splicing: String,
}

/// The iterated recollements gluing strata `0, …, n` from the bottom up.
pub fn recollement_schedule(n: u32) -> Vec<ScheduleStep> {
    (0..n)
        .map(|k| ScheduleStep {
            stratum: k,
            residual: (k + 1..=n).collect(),
            functor: format!("t_{k} : T_{k} → T_{{≥{}}}", k + 1),
            splicing: format!("Γ_{{P_{}}} ∘ t_{k}", k + 1),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub cube_dim: u32,
    pub stratum: u32,
    pub factor_labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeDiagram {
    pub n: u32,
    pub nodes: BTreeMap<Subset, Node>,
    pub edges: BTreeMap<(Subset, u32), EdgeKind>,
}

/// Diagram of height `n` whose nodes at maximum `λ` carry `labels[λ]`.
pub fn cube_diagram(n: u32, labels: &[Vec<String>]) -> CubeDiagram {
    let mut nodes = BTreeMap::new();
    let mut edges = BTreeMap::new();
    for phi in punctured_cube(n) {
        let stratum = phi.top();
        nodes.insert(
            phi,
            Node {
                cube_dim: isomax_dim(phi),
                stratum,
                factor_labels: labels.get(stratum as usize).cloned().unwrap_or_default(),
            },
        );
        for j in (0..=n).filter(|&j| !phi.contains(j)) {
            edges.insert((phi, j), classify_edge(phi, j).expect("j outside phi"));
        }
    }
    CubeDiagram { n, nodes, edges }
}

/// Factor labels per stratum of a dispersible space, using `label` for
/// concrete points and a marker per family.
pub fn strata_labels(
    space: &FlaggedPriestley,
    label: impl Fn(&str) -> Result<String>,
) -> Result<(u32, Vec<Vec<String>>)> {
    let h = thomason_heights(space)?;
    let Height::Finite(n) = h.max() else {
        return Err(PrismError::NotDispersible);
    };
    let mut labels = vec![Vec::new(); n as usize + 1];
    for (p, v) in &h.heights {
        let Height::Finite(v) = v else {
            return Err(PrismError::NotDispersible);
        };
        labels[*v as usize].push(label(p)?);
    }
    for (id, v) in &h.family_heights {
        let Height::Finite(v) = v else {
            return Err(PrismError::NotDispersible);
        };
        labels[*v as usize].push(family_label(id));
    }
    Ok((n, labels))
}

/// Decomposition diagram of an arbitrary dispersible flagged space, labeling
/// each point by its name.
pub fn diagram_of_space(space: &FlaggedPriestley) -> Result<CubeDiagram> {
    let (n, labels) = strata_labels(space, |p| Ok(p.to_string()))?;
    Ok(cube_diagram(n, &labels))
}

fn snapshot_diagram(snap: &Snapshot, space: &FlaggedPriestley) -> Result<CubeDiagram> {
    let (n, labels) = strata_labels(space, |p| {
        let key = snap.key(p).ok_or_else(|| PrismError::UnknownPoint(p.to_string()))?;
        factor_label(&snap.group, key)
    })?;
    Ok(cube_diagram(n, &labels))
}

/// The punctured-cube decomposition of the snapshot of `g`.
pub fn build_decomposition(g: &GroupId, bound: u32) -> Result<CubeDiagram> {
    let snap = flagged_snapshot(g, bound)?;
    snapshot_diagram(&snap, &snap.space)
}

/// One decomposition per clopen piece of the snapshot, by piece name.
pub fn build_piece_decompositions(g: &GroupId, bound: u32) -> Result<Vec<(String, CubeDiagram)>> {
    let snap = flagged_snapshot(g, bound)?;
    snap.pieces
        .iter()
        .map(|piece| Ok((piece.name.clone(), snapshot_diagram(&snap, &snap.piece_space(piece)?)?)))
        .collect()
}

fn edge_label(phi: Subset, j: u32, kind: EdgeKind) -> String {
    match kind {
        EdgeKind::Projection(j) => format!("π_{j}"),
        EdgeKind::Diagonal => "F(i↦i+1)^Δ".into(),
        // Indexed by the maximum of the source and the added element.
        EdgeKind::Laxness(_) => format!("η_{{{},{j}}}", phi.top()),
    }
}

impl CubeDiagram {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph cube {\n  rankdir=LR;\n");
        for (phi, node) in &self.nodes {
            let mut lines = vec![
                format!("φ={phi}"),
                format!("dim={}", node.cube_dim),
                format!("stratum={}", node.stratum),
            ];
            lines.extend(node.factor_labels.iter().cloned());
            let label = lines
                .iter()
                .map(|l| escape(l))
                .collect::<Vec<_>>()
                .join("\\n");
            out.push_str(&format!("  \"φ={phi}\" [shape=box, label=\"{label}\"];\n"));
        }
        for (&(phi, j), &kind) in &self.edges {
            let mut attrs = format!("kind={}", kind.kind());
            if let EdgeKind::Laxness(z) = kind {
                attrs.push_str(&format!(", zeta={z}"));
            }
            attrs.push_str(&format!(", label=\"{}\"", escape(&edge_label(phi, j, kind))));
            out.push_str(&format!("  \"φ={phi}\" -> \"φ={}\" [{attrs}];\n", phi.with(j)));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        let nodes: Vec<_> = self
            .nodes
            .iter()
            .map(|(phi, node)| {
                json!({
                    "subset": phi.to_string(),
                    "cubeDim": node.cube_dim,
                    "stratum": node.stratum,
                    "factorLabels": node.factor_labels,
                })
            })
            .collect();
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|(&(phi, j), &kind)| {
                let mut e = json!({
                    "from": phi.to_string(),
                    "to": phi.with(j).to_string(),
                    "j": j,
                    "kind": kind.kind(),
                    "label": edge_label(phi, j, kind),
                });
                if let EdgeKind::Laxness(z) = kind {
                    e["zeta"] = json!(z);
                }
                e
            })
            .collect();
        let doc = json!({
            "schema": "cube/v1",
            "n": self.n,
            "nodes": nodes,
            "edges": edges,
            "schedule": recollement_schedule(self.n),
        });
        serde_json::to_string_pretty(&doc).expect("diagram serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n\t{}\n", self.n);
        for (phi, node) in &self.nodes {
            out.push_str(&format!(
                "node\t{phi}\tdim={}\tstratum={}\t{}\n",
                node.cube_dim,
                node.stratum,
                node.factor_labels.join(" | ")
            ));
        }
        for (&(phi, j), &kind) in &self.edges {
            out.push_str(&format!("edge\t{phi}\t{}\t{}\n", phi.with(j), edge_label(phi, j, kind)));
        }
        for step in recollement_schedule(self.n) {
            out.push_str(&format!("step\t{}\t{}\n", step.functor, step.splicing));
        }
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn shape(l: u32) -> String {
    match l {
        0 => "[0]".into(),
        l => vec!["[1]"; l as usize].join(" × "),
    }
}

/// The table of isomax undercategories for `n`, one subset per line.
pub fn isomax_table(n: u32) -> String {
    let mut out = String::new();
    for phi in punctured_cube(n) {
        let members: Vec<String> = isomax_undercategory(phi).iter().map(|s| s.to_string()).collect();
        out.push_str(&format!(
            "{phi}\t{}\t{{{}}}\t{}\n",
            isomax_dim(phi),
            members.join(", "),
            shape(isomax_dim(phi))
        ));
    }
    out
}
