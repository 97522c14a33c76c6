//! Command-line driver behind the `mrplate` binary.
//!
//! Exit codes: 0 success, 1 usage error, 2 numeric or I/O failure.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::assembly::{apply_constraints, solve, splice, strain_energy, PlateModel};
use crate::cases::{
    convergence_study, run_case, Case, CaseResult, ConvergenceTable, Discretization, RingSlab, SkewPlate, SquareSs,
    SupportedEdges,
};
use crate::error::{Error, Result};
use crate::io::{write_field_csv_file, write_table_csv, write_table_json, ModelFile};
use crate::quadrature::DEFAULT_ORDER;
use crate::shape_basis::ResolutionLevel;

#[derive(Debug, Parser)]
#[command(name = "mrplate", version, about = "Multiresolution plate bending elements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one benchmark configuration.
    Run(RunArgs),
    /// Solve a benchmark at several resolutions and tabulate the coefficient.
    Converge(ConvergeArgs),
    /// Solve a model described by a JSON file.
    Model(ModelArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseName {
    Skew,
    Ring,
    SquareSs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SsEdges {
    /// Edges parallel to the x axis.
    Horizontal,
    /// The two oblique edges.
    Oblique,
}

#[derive(Debug, Args)]
pub struct CaseArgs {
    #[arg(long, value_enum)]
    pub case: CaseName,
    /// Classical 4-node elements instead of multiresolution ones.
    #[arg(long)]
    pub mono: bool,
    /// Gauss points per direction (per cell).
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub quad_order: usize,
    /// Ring inner over outer radius.
    #[arg(long, default_value_t = 0.5)]
    pub ba_ratio: f64,
    /// Skew plate corner angle in degrees.
    #[arg(long, default_value_t = 60.0)]
    pub skew_angle: f64,
    /// Simply supported edge pair of the skew plate.
    #[arg(long, value_enum, default_value_t = SsEdges::Horizontal)]
    pub ss_edges: SsEdges,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    /// Nodes per direction (per element), e.g. 9x9.
    #[arg(long, value_parser = parse_dims, conflicts_with = "mono")]
    pub rl: Option<(usize, usize)>,
    /// Classical elements per direction, e.g. 8x8 (with --mono).
    #[arg(long, value_parser = parse_dims, requires = "mono")]
    pub mesh: Option<(usize, usize)>,
    /// Write the nodal field as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the result row in this format instead of a summary line.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    /// Comma-separated node counts, e.g. 5x5,9x9,17x17.
    #[arg(long, value_parser = parse_dims, value_delimiter = ',', conflicts_with = "mono")]
    pub rl_list: Vec<(usize, usize)>,
    /// Comma-separated classical meshes (with --mono).
    #[arg(long, value_parser = parse_dims, value_delimiter = ',', requires = "mono")]
    pub mesh_list: Vec<(usize, usize)>,
    /// Write the table here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// JSON model file.
    pub file: PathBuf,
    /// Write the nodal field as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the summary in this format instead of text.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Parses `MxN`.
pub fn parse_dims(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected MxN, got '{s}'"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("'{t}': {e}"));
    Ok((parse(a)?, parse(b)?))
}

impl CaseArgs {
    fn case(&self) -> Result<Case> {
        Ok(match self.case {
            CaseName::Skew => Case::Skew(SkewPlate {
                angle_deg: self.skew_angle,
                supported: match self.ss_edges {
                    SsEdges::Horizontal => SupportedEdges::Horizontal,
                    SsEdges::Oblique => SupportedEdges::Oblique,
                },
                ..SkewPlate::default()
            }),
            CaseName::Ring => Case::Ring(RingSlab {
                ratio: self.ba_ratio,
                ..RingSlab::default()
            }),
            CaseName::SquareSs => Case::SquareSs(SquareSs::default()),
        })
    }

    fn discretization(&self, rl: Option<(usize, usize)>, mesh: Option<(usize, usize)>) -> Result<Discretization> {
        if self.mono {
            let (a, b) = mesh.unwrap_or(match self.case {
                CaseName::Skew => (8, 8),
                CaseName::Ring => (16, 32),
                CaseName::SquareSs => (16, 16),
            });
            Ok(Discretization::Classical(a, b))
        } else {
            let (a, b) = rl.unwrap_or(match self.case {
                CaseName::Skew => (9, 9),
                CaseName::Ring => (5, 3),
                CaseName::SquareSs => (17, 17),
            });
            Ok(Discretization::Multiresolution(ResolutionLevel::from_node_counts(
                a, b,
            )?))
        }
    }
}

#[derive(Debug, Serialize)]
struct ModelSummary {
    elements: usize,
    nodes: usize,
    dofs: usize,
    free_dofs: usize,
    max_abs_w: f64,
    strain_energy: f64,
}

fn print_row<W: Write>(row: &CaseResult, format: Option<Format>, out: &mut W) -> Result<()> {
    match format {
        None => writeln!(
            out,
            "{} {}: coefficient {:.4} (w = {:e}, {} dofs, {:.3} s)",
            row.case, row.discretization, row.coefficient, row.deflection, row.dofs, row.wall_time_s
        )?,
        Some(Format::Csv) => write_table_csv(
            &ConvergenceTable {
                rows: vec![row.clone()],
            },
            out,
        )?,
        Some(Format::Json) => {
            serde_json::to_writer_pretty(&mut *out, row)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn run<W: Write>(args: &RunArgs, out: &mut W) -> Result<()> {
    let case = args.case.case()?;
    let disc = args.case.discretization(args.rl, args.mesh)?;
    let (row, solved) = run_case(&case, disc, args.case.quad_order)?;
    if let Some(path) = &args.out {
        write_field_csv_file(&solved.system.system, &solved.solution, Some(row.coefficient), path)?;
    }
    print_row(&row, args.format, out)
}

fn converge<W: Write, E: Write>(args: &ConvergeArgs, out: &mut W, err: &mut E) -> Result<()> {
    let case = args.case.case()?;
    let discs = if args.case.mono {
        if args.mesh_list.is_empty() {
            return Err(Error::InvalidCase("--mono needs --mesh-list".into()));
        }
        args.mesh_list
            .iter()
            .map(|&m| args.case.discretization(None, Some(m)))
            .collect::<Result<Vec<_>>>()?
    } else {
        if args.rl_list.is_empty() {
            return Err(Error::InvalidCase("--rl-list is required".into()));
        }
        args.rl_list
            .iter()
            .map(|&r| args.case.discretization(Some(r), None))
            .collect::<Result<Vec<_>>>()?
    };
    let outcome = convergence_study(&case, &discs, args.case.quad_order);
    let mut buf = Vec::new();
    match args.format {
        Format::Csv => write_table_csv(&outcome.table, &mut buf)?,
        Format::Json => write_table_json(&outcome.table, &mut buf)?,
    }
    match &args.out {
        Some(path) => std::fs::write(path, &buf)?,
        None => out.write_all(&buf)?,
    }
    if let Some((disc, e)) = outcome.failure {
        writeln!(err, "study stopped at {disc}; the table above is partial")?;
        return Err(e);
    }
    Ok(())
}

fn diagnostics(model: &PlateModel) -> String {
    let loaded = model.pressure.iter().filter(|q| **q != 0.0).count();
    format!(
        "{} elements, {} constraints, {} uniformly loaded elements, {} point loads",
        model.elements.len(),
        model.constraints.len(),
        loaded,
        model.point_loads.len()
    )
}

fn model<W: Write, E: Write>(args: &ModelArgs, out: &mut W, err: &mut E) -> Result<()> {
    let model = ModelFile::read(&args.file)?.to_model()?;
    let solved = splice(&model)
        .and_then(|sys| apply_constraints(sys, &model.constraints))
        .and_then(|cs| solve(&cs).map(|s| (cs, s)));
    let (cs, sol) = match solved {
        Ok(v) => v,
        Err(e) => {
            writeln!(err, "model: {}", diagnostics(&model))?;
            return Err(e);
        }
    };
    if let Some(path) = &args.out {
        write_field_csv_file(&cs.system, &sol, None, path)?;
    }
    let summary = ModelSummary {
        elements: model.elements.len(),
        nodes: cs.system.node_count(),
        dofs: cs.system.dof_count(),
        free_dofs: cs.free_dof_count(),
        max_abs_w: (0..cs.system.node_count())
            .map(|i| sol.node(i)[0].abs())
            .fold(0.0, f64::max),
        strain_energy: strain_energy(&cs.system, &sol),
    };
    match args.format {
        None => writeln!(
            out,
            "{} elements, {} nodes, {} dofs ({} free); max |w| = {:e}; strain energy = {:e}",
            summary.elements, summary.nodes, summary.dofs, summary.free_dofs, summary.max_abs_w, summary.strain_energy
        )?,
        Some(Format::Csv) => {
            writeln!(out, "elements,nodes,dofs,free_dofs,max_abs_w,strain_energy")?;
            writeln!(
                out,
                "{},{},{},{},{:e},{:e}",
                summary.elements,
                summary.nodes,
                summary.dofs,
                summary.free_dofs,
                summary.max_abs_w,
                summary.strain_energy
            )?;
        }
        Some(Format::Json) => {
            serde_json::to_writer_pretty(&mut *out, &summary)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn cli_main<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Run(a) => run(a, out),
        Command::Converge(a) => converge(a, out, err),
        Command::Model(a) => model(a, out, err),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InvalidCase(_) | Error::InvalidResolution { .. } => 1,
                _ => 2,
            }
        }
    }
}
