//! Benchmark models with their normalized deflection coefficients.
//!
//! * skew plate: rhombus of side `L` with a 60° corner, one pair of opposite
//!   edges simply supported, the other pair free, uniform `q`; coefficient
//!   `100 D w_center / (q L^4)`.
//! * ring slab: quarter of an annulus, outer edge clamped, inner edge free,
//!   uniform `q`; coefficient `max_inner w E t^3 / (q a^4)`.
//! * simply supported square, uniform `q`; coefficient `D w_center / (q L^4)`.
//!
//! Simple support constrains `w` only (rotations stay free).

use std::time::Instant;

use serde::Serialize;

use crate::assembly::{solve_model, Constraint, Dof, NodeSelector, PlateElement, PlateModel, Side};
use crate::element::Material;
use crate::error::{Error, Result};
use crate::geometry::QuadGeometry;
use crate::quadrature::DEFAULT_ORDER;
use crate::shape_basis::ResolutionLevel;

/// How a case is discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discretization {
    /// Multiresolution elements at the given level (per element).
    Multiresolution(ResolutionLevel),
    /// Mesh of classical elements, `(first, second)` elements per direction.
    Classical(usize, usize),
}

impl std::fmt::Display for Discretization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Discretization::Multiresolution(rl) => write!(f, "RL {rl}"),
            Discretization::Classical(a, b) => write!(f, "mesh {a}x{b}"),
        }
    }
}

/// Which pair of opposite rhombus edges is simply supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SupportedEdges {
    /// Edges 1-2 and 4-3, parallel to the x axis.
    #[default]
    Horizontal,
    /// The oblique edges 1-4 and 2-3.
    Oblique,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkewPlate {
    pub side: f64,
    pub angle_deg: f64,
    pub q: f64,
    pub material: Material,
    pub supported: SupportedEdges,
}

impl Default for SkewPlate {
    fn default() -> Self {
        Self {
            side: 1.0,
            angle_deg: 60.0,
            q: 1.0,
            material: Material::new(1.0, 1.0, 0.3).expect("valid default material"),
            supported: SupportedEdges::Horizontal,
        }
    }
}

impl SkewPlate {
    fn corners(&self) -> [[f64; 2]; 4] {
        let (s, c) = self.angle_deg.to_radians().sin_cos();
        let l = self.side;
        [[0.0, 0.0], [l, 0.0], [l + l * c, l * s], [l * c, l * s]]
    }

    fn normalization(&self) -> f64 {
        100.0 * self.material.flexural_rigidity() / (self.q * self.side.powi(4))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RingSlab {
    pub outer_radius: f64,
    /// Inner over outer radius.
    pub ratio: f64,
    pub q: f64,
    pub material: Material,
    /// Number of straight-sided elements over the quarter (multiresolution).
    pub elements: usize,
}

impl Default for RingSlab {
    fn default() -> Self {
        Self {
            outer_radius: 1.0,
            ratio: 0.5,
            q: 1.0,
            material: Material::new(1.0, 1.0, 0.3).expect("valid default material"),
            elements: 4,
        }
    }
}

impl RingSlab {
    fn normalization(&self) -> f64 {
        let m = &self.material;
        m.youngs_modulus * m.thickness.powi(3) / (self.q * self.outer_radius.powi(4))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SquareSs {
    pub side: f64,
    pub q: f64,
    pub material: Material,
}

impl Default for SquareSs {
    fn default() -> Self {
        Self {
            side: 1.0,
            q: 1.0,
            material: Material::new(1.0, 1.0, 0.3).expect("valid default material"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Case {
    Skew(SkewPlate),
    Ring(RingSlab),
    SquareSs(SquareSs),
}

impl Case {
    pub fn id(&self) -> &'static str {
        match self {
            Case::Skew(_) => "skew",
            Case::Ring(_) => "ring",
            Case::SquareSs(_) => "square-ss",
        }
    }
}

/// Where the reported deflection is read.
#[derive(Debug, Clone, PartialEq)]
pub enum Probe {
    /// Nodal `w` at a physical point.
    Node([f64; 2]),
    /// Largest nodal `w` over the selected nodes.
    MaxOver(Vec<NodeSelector>),
}

/// A case instantiated as a plate model plus its coefficient extractor.
#[derive(Debug, Clone)]
pub struct CaseModel {
    pub model: PlateModel,
    pub probe: Probe,
    /// Multiplies the probed deflection to give the coefficient.
    pub normalization: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub case: String,
    pub discretization: String,
    pub deflection: f64,
    pub coefficient: f64,
    pub dofs: usize,
    pub wall_time_s: f64,
}

/// Rows sorted by dof count.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<CaseResult>,
}

/// Outcome of a convergence study; on failure the rows computed so far are kept.
#[derive(Debug)]
pub struct StudyOutcome {
    pub table: ConvergenceTable,
    pub failure: Option<(String, Error)>,
}

fn subdivide(corners: [[f64; 2]; 4], nx: usize, ny: usize, i: usize, j: usize) -> [[f64; 2]; 4] {
    let at = |u: f64, v: f64| {
        let n = [(1.0 - u) * (1.0 - v), u * (1.0 - v), u * v, (1.0 - u) * v];
        let mut p = [0.0; 2];
        for (w, c) in n.iter().zip(&corners) {
            p[0] += w * c[0];
            p[1] += w * c[1];
        }
        p
    };
    let (u0, u1) = (i as f64 / nx as f64, (i + 1) as f64 / nx as f64);
    let (v0, v1) = (j as f64 / ny as f64, (j + 1) as f64 / ny as f64);
    [at(u0, v0), at(u1, v0), at(u1, v1), at(u0, v1)]
}

/// Single multiresolution element or a classical mesh on one quadrilateral;
/// returns the model and the element index owning each boundary side.
fn patch_model(
    corners: [[f64; 2]; 4],
    disc: Discretization,
    material: Material,
    q: f64,
) -> Result<(PlateModel, Vec<(usize, Side)>)> {
    let mut model = PlateModel {
        quad_order: DEFAULT_ORDER,
        ..PlateModel::default()
    };
    let mut boundary = Vec::new();
    match disc {
        Discretization::Multiresolution(rl) => {
            let e = model.add_element(
                PlateElement::multiresolution(QuadGeometry::new(corners)?, rl, material),
                q,
            );
            boundary.extend(Side::ALL.map(|s| (e, s)));
        }
        Discretization::Classical(nx, ny) => {
            if nx == 0 || ny == 0 {
                return Err(Error::InvalidCase("mesh must have at least one element".into()));
            }
            for i in 0..nx {
                for j in 0..ny {
                    let g = QuadGeometry::new(subdivide(corners, nx, ny, i, j))?;
                    let e = model.add_element(PlateElement::classical(g, material), q);
                    if i == 0 {
                        boundary.push((e, Side::Xi0));
                    }
                    if i == nx - 1 {
                        boundary.push((e, Side::Xi1));
                    }
                    if j == 0 {
                        boundary.push((e, Side::Eta0));
                    }
                    if j == ny - 1 {
                        boundary.push((e, Side::Eta1));
                    }
                }
            }
        }
    }
    Ok((model, boundary))
}

fn require_center_node(disc: Discretization) -> Result<()> {
    let (a, b) = match disc {
        Discretization::Multiresolution(rl) => (rl.m(), rl.n()),
        Discretization::Classical(a, b) => (a, b),
    };
    if a % 2 != 0 || b % 2 != 0 {
        return Err(Error::InvalidCase(format!(
            "{disc} has no center node: node counts must be odd"
        )));
    }
    Ok(())
}

fn support(model: &mut PlateModel, boundary: &[(usize, Side)], sides: &[Side], dofs: &[Dof]) {
    for &(element, side) in boundary.iter().filter(|(_, s)| sides.contains(s)) {
        model
            .constraints
            .push(Constraint::fixed(NodeSelector::Edge { element, side }, dofs));
    }
}

pub fn case_skew_plate(case: &SkewPlate, disc: Discretization) -> Result<CaseModel> {
    require_center_node(disc)?;
    let corners = case.corners();
    let (mut model, boundary) = patch_model(corners, disc, case.material, case.q)?;
    let sides = match case.supported {
        SupportedEdges::Horizontal => [Side::Eta0, Side::Eta1],
        SupportedEdges::Oblique => [Side::Xi0, Side::Xi1],
    };
    support(&mut model, &boundary, &sides, &[Dof::W]);
    let center = [
        0.25 * corners.iter().map(|c| c[0]).sum::<f64>(),
        0.25 * corners.iter().map(|c| c[1]).sum::<f64>(),
    ];
    Ok(CaseModel {
        model,
        probe: Probe::Node(center),
        normalization: case.normalization(),
    })
}

pub fn case_square_ss(case: &SquareSs, disc: Discretization) -> Result<CaseModel> {
    require_center_node(disc)?;
    let l = case.side;
    let corners = [[0.0, 0.0], [l, 0.0], [l, l], [0.0, l]];
    let (mut model, boundary) = patch_model(corners, disc, case.material, case.q)?;
    support(&mut model, &boundary, &Side::ALL, &[Dof::W]);
    Ok(CaseModel {
        model,
        probe: Probe::Node([0.5 * l, 0.5 * l]),
        normalization: case.material.flexural_rigidity() / (case.q * l.powi(4)),
    })
}

/// Quarter ring: the first natural direction is radial (inner edge at
/// `xi = 0`), the second circumferential, counterclockwise from the x axis.
///
/// Multiresolution models use `case.elements` straight-sided elements each
/// spanning an equal angle, so interior edge nodes sit on chords. Classical
/// meshes place every node on its circle.
pub fn case_ring_slab(case: &RingSlab, disc: Discretization) -> Result<CaseModel> {
    let a = case.outer_radius;
    let b = case.ratio * a;
    if !(case.ratio > 0.0 && case.ratio < 1.0) {
        return Err(Error::InvalidGeometry(format!(
            "inner radius ratio {} must lie in (0, 1)",
            case.ratio
        )));
    }
    let polar = |r: f64, t: f64| [r * t.cos(), r * t.sin()];
    let quarter = std::f64::consts::FRAC_PI_2;
    let mut model = PlateModel::default();
    let mut inner = Vec::new();
    let (radial, circ, make): (usize, usize, Box<dyn Fn(QuadGeometry) -> PlateElement>) = match disc {
        Discretization::Multiresolution(rl) => {
            if case.elements == 0 {
                return Err(Error::InvalidCase("ring needs at least one element".into()));
            }
            let mat = case.material;
            (
                1,
                case.elements,
                Box::new(move |g| PlateElement::multiresolution(g, rl, mat)),
            )
        }
        Discretization::Classical(nr, nc) => {
            if nr == 0 || nc == 0 {
                return Err(Error::InvalidCase("mesh must have at least one element".into()));
            }
            let mat = case.material;
            (nr, nc, Box::new(move |g| PlateElement::classical(g, mat)))
        }
    };
    for i in 0..radial {
        let (r0, r1) = (
            b + (a - b) * i as f64 / radial as f64,
            b + (a - b) * (i + 1) as f64 / radial as f64,
        );
        for j in 0..circ {
            let (t0, t1) = (quarter * j as f64 / circ as f64, quarter * (j + 1) as f64 / circ as f64);
            let g = QuadGeometry::new([polar(r0, t0), polar(r1, t0), polar(r1, t1), polar(r0, t1)])?;
            let e = model.add_element(make(g), case.q);
            if i == 0 {
                inner.push(NodeSelector::Edge {
                    element: e,
                    side: Side::Xi0,
                });
            }
            if i == radial - 1 {
                model.constraints.push(Constraint::fixed(
                    NodeSelector::Edge {
                        element: e,
                        side: Side::Xi1,
                    },
                    &Dof::ALL,
                ));
            }
            if j == 0 {
                // symmetry about the x axis: dw/dy = 0
                model.constraints.push(Constraint::fixed(
                    NodeSelector::Edge {
                        element: e,
                        side: Side::Eta0,
                    },
                    &[Dof::ThetaX],
                ));
            }
            if j == circ - 1 {
                // symmetry about the y axis: dw/dx = 0
                model.constraints.push(Constraint::fixed(
                    NodeSelector::Edge {
                        element: e,
                        side: Side::Eta1,
                    },
                    &[Dof::ThetaY],
                ));
            }
        }
    }
    Ok(CaseModel {
        model,
        probe: Probe::MaxOver(inner),
        normalization: case.normalization(),
    })
}

pub fn build_case(case: &Case, disc: Discretization) -> Result<CaseModel> {
    match case {
        Case::Skew(c) => case_skew_plate(c, disc),
        Case::Ring(c) => case_ring_slab(c, disc),
        Case::SquareSs(c) => case_square_ss(c, disc),
    }
}

/// Builds, solves and normalizes one configuration.
pub fn run_case(case: &Case, disc: Discretization, quad_order: usize) -> Result<(CaseResult, CaseSolution)> {
    let start = Instant::now();
    let mut cm = build_case(case, disc)?;
    cm.model.quad_order = quad_order;
    let (cs, solution) = solve_model(&cm.model)?;
    let sys = &cs.system;
    let deflection = match &cm.probe {
        Probe::Node(p) => {
            let id = sys.select(&NodeSelector::At(*p))?[0];
            solution.node(id)[0]
        }
        Probe::MaxOver(sel) => {
            let mut best = f64::NEG_INFINITY;
            for s in sel {
                for id in sys.select(s)? {
                    best = best.max(solution.node(id)[0]);
                }
            }
            best
        }
    };
    let result = CaseResult {
        case: case.id().to_string(),
        discretization: disc.to_string(),
        deflection,
        coefficient: deflection * cm.normalization,
        dofs: sys.dof_count(),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok((
        result,
        CaseSolution {
            model: cm.model,
            system: cs,
            solution,
        },
    ))
}

/// Solved state of a case, kept for field output.
#[derive(Debug, Clone)]
pub struct CaseSolution {
    pub model: PlateModel,
    pub system: crate::assembly::ConstrainedSystem,
    pub solution: crate::assembly::Solution,
}

/// Runs each configuration in turn; stops at the first failure.
pub fn convergence_study(case: &Case, discs: &[Discretization], quad_order: usize) -> StudyOutcome {
    let mut table = ConvergenceTable::default();
    for &disc in discs {
        match run_case(case, disc, quad_order) {
            Ok((row, _)) => table.rows.push(row),
            Err(e) => {
                table.rows.sort_by_key(|r| r.dofs);
                return StudyOutcome {
                    table,
                    failure: Some((disc.to_string(), e)),
                };
            }
        }
    }
    table.rows.sort_by_key(|r| r.dofs);
    StudyOutcome { table, failure: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rl(nx: usize, ny: usize) -> Discretization {
        Discretization::Multiresolution(ResolutionLevel::from_node_counts(nx, ny).unwrap())
    }

    #[test]
    fn even_node_counts_rejected() {
        assert!(matches!(
            case_skew_plate(&SkewPlate::default(), rl(8, 8)),
            Err(Error::InvalidCase(_))
        ));
        assert!(case_skew_plate(&SkewPlate::default(), Discretization::Classical(7, 8)).is_err());
    }

    #[test]
    fn ring_requires_inner_smaller_than_outer() {
        let bad = RingSlab {
            ratio: 1.2,
            ..RingSlab::default()
        };
        assert!(case_ring_slab(&bad, rl(5, 3)).is_err());
    }

    #[test]
    fn ring_splices_to_five_by_nine() {
        let cm = case_ring_slab(&RingSlab::default(), rl(5, 3)).unwrap();
        let sys = crate::assembly::splice(&cm.model).unwrap();
        assert_eq!(cm.model.elements.len(), 4);
        assert_eq!(sys.node_count(), 45);
    }

    #[test]
    fn dof_counts() {
        let (r, _) = run_case(&Case::SquareSs(SquareSs::default()), rl(5, 5), DEFAULT_ORDER).unwrap();
        assert_eq!(r.dofs, 75);
        let (r, _) = run_case(
            &Case::SquareSs(SquareSs::default()),
            Discretization::Classical(4, 4),
            DEFAULT_ORDER,
        )
        .unwrap();
        assert_eq!(r.dofs, 75);
    }

    #[test]
    fn study_keeps_partial_results() {
        let out = convergence_study(
            &Case::SquareSs(SquareSs::default()),
            &[rl(5, 5), rl(6, 6), rl(9, 9)],
            DEFAULT_ORDER,
        );
        assert_eq!(out.table.rows.len(), 1);
        assert!(out.failure.is_some());
    }
}
