//! JSON model files and CSV/JSON result writers.
//!
//! Model file layout (unknown keys are rejected at every level):
//!
//! ```json
//! {
//!   "materials": [{ "id": "steel", "E": 2.1e11, "h": 0.01, "mu": 0.3 }],
//!   "elements": [{
//!     "corners": [[0, 0], [1, 0], [1, 1], [0, 1]],
//!     "rl": { "m": 4, "n": 4 },
//!     "material": "steel",
//!     "frame_angle_deg": 0.0
//!   }],
//!   "constraints": [
//!     { "node": { "edge": { "element": 0, "side": "xi0" } }, "dofs": ["w", "theta_x", "theta_y"] },
//!     { "node": { "at": [1.0, 1.0] }, "dofs": ["w"], "values": [0.001] },
//!     { "node": { "id": 3 }, "dofs": ["theta_y"] }
//!   ],
//!   "loads": {
//!     "uniform": [{ "element": 0, "q": 1.0 }],
//!     "point": [{ "element": 0, "at": [0.5, 0.5], "P": 10.0 }]
//!   },
//!   "quad_order": 4
//! }
//! ```
//!
//! `rl` counts intervals per direction; omit it for a classical 4-node element.
//! `at` in a constraint is a physical point, in a point load a natural point.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::assembly::{
    Constraint, Dof, Frame, GlobalSystem, NodeSelector, PlateElement, PlateModel, PointLoad, Side, Solution,
};
use crate::cases::ConvergenceTable;
use crate::element::Material;
use crate::error::{Error, Result};
use crate::geometry::{NaturalPoint, QuadGeometry};
use crate::quadrature::DEFAULT_ORDER;
use crate::shape_basis::ResolutionLevel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub materials: Vec<MaterialEntry>,
    pub elements: Vec<ElementEntry>,
    #[serde(default)]
    pub constraints: Vec<ConstraintEntry>,
    #[serde(default)]
    pub loads: LoadsEntry,
    #[serde(default = "default_order")]
    pub quad_order: usize,
}

fn default_order() -> usize {
    DEFAULT_ORDER
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialEntry {
    pub id: String,
    #[serde(rename = "E")]
    pub e: f64,
    pub h: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RlEntry {
    pub m: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementEntry {
    pub corners: [[f64; 2]; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rl: Option<RlEntry>,
    pub material: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame_angle_deg: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub element: usize,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum NodeEntry {
    Id(usize),
    At([f64; 2]),
    Edge(EdgeEntry),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DofEntry {
    W,
    ThetaX,
    ThetaY,
}

impl From<DofEntry> for Dof {
    fn from(d: DofEntry) -> Self {
        match d {
            DofEntry::W => Dof::W,
            DofEntry::ThetaX => Dof::ThetaX,
            DofEntry::ThetaY => Dof::ThetaY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintEntry {
    pub node: NodeEntry,
    pub dofs: Vec<DofEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadsEntry {
    #[serde(default)]
    pub uniform: Vec<UniformEntry>,
    #[serde(default)]
    pub point: Vec<PointEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformEntry {
    pub element: usize,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub element: usize,
    pub at: [f64; 2],
    #[serde(rename = "P")]
    pub p: f64,
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_model(&self) -> Result<PlateModel> {
        let mut model = PlateModel {
            quad_order: self.quad_order,
            ..PlateModel::default()
        };
        for el in &self.elements {
            let entry = self
                .materials
                .iter()
                .find(|m| m.id == el.material)
                .ok_or_else(|| Error::Model(format!("unknown material '{}'", el.material)))?;
            let mat = Material::new(entry.e, entry.h, entry.mu)?;
            let geom = QuadGeometry::new(el.corners)?;
            let mut element = match el.rl {
                Some(rl) => PlateElement::multiresolution(geom, ResolutionLevel::new(rl.m, rl.n)?, mat),
                None => PlateElement::classical(geom, mat),
            };
            if let Some(angle) = el.frame_angle_deg {
                element = element.with_frame(Frame::in_plane(angle.to_radians()));
            }
            model.add_element(element, 0.0);
        }
        let count = model.elements.len();
        let check = |e: usize| {
            if e < count {
                Ok(e)
            } else {
                Err(Error::Model(format!("element {e} out of range ({count} elements)")))
            }
        };
        for u in &self.loads.uniform {
            model.pressure[check(u.element)?] += u.q;
        }
        for p in &self.loads.point {
            model.point_loads.push(PointLoad {
                element: check(p.element)?,
                at: NaturalPoint::new(p.at[0], p.at[1]),
                force: p.p,
            });
        }
        for c in &self.constraints {
            let nodes = match &c.node {
                NodeEntry::Id(id) => NodeSelector::Global(*id),
                NodeEntry::At(p) => NodeSelector::At(*p),
                NodeEntry::Edge(e) => NodeSelector::Edge {
                    element: check(e.element)?,
                    side: e.side,
                },
            };
            model.constraints.push(Constraint {
                nodes,
                dofs: c.dofs.iter().map(|&d| d.into()).collect(),
                values: c.values.clone(),
            });
        }
        Ok(model)
    }
}

/// Writes nodal results, one row per global node in id order, followed by a
/// `# coefficient,<value>` footer when a coefficient is given.
pub fn write_field_csv<W: Write>(
    system: &GlobalSystem,
    solution: &Solution,
    coefficient: Option<f64>,
    out: &mut W,
) -> Result<()> {
    writeln!(out, "node_id,x,y,w,theta_x,theta_y")?;
    for (id, p) in system.nodes.iter().enumerate() {
        let [w, tx, ty] = solution.node(id);
        writeln!(
            out,
            "{id},{:e},{:e},{:e},{:e},{:e}",
            p.x,
            p.y,
            w + 0.0,
            tx + 0.0,
            ty + 0.0
        )?;
    }
    if let Some(c) = coefficient {
        writeln!(out, "# coefficient,{c:.4}")?;
    }
    Ok(())
}

pub fn write_field_csv_file(
    system: &GlobalSystem,
    solution: &Solution,
    coefficient: Option<f64>,
    path: &Path,
) -> Result<()> {
    let mut buf = Vec::new();
    write_field_csv(system, solution, coefficient, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}

/// Wall time is left out so the output is reproducible.
pub fn write_table_csv<W: Write>(table: &ConvergenceTable, out: &mut W) -> Result<()> {
    writeln!(out, "case,discretization,dofs,deflection,coefficient")?;
    for r in &table.rows {
        writeln!(
            out,
            "{},{},{},{:e},{:.4}",
            r.case, r.discretization, r.dofs, r.deflection, r.coefficient
        )?;
    }
    Ok(())
}

pub fn write_table_json<W: Write>(table: &ConvergenceTable, out: &mut W) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, table)?;
    writeln!(out)?;
    Ok(())
}
