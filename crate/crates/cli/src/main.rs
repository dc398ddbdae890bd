//! `dispersive` command-line tool.
//!
//! Exit status: 0 success, 1 infeasible or failed verification, 2 input
//! error, 3 search budget exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use dispersive::gadgets::{compose, parse_assignment, Formula, GadgetKind, Layout};
use dispersive::io::{dispersion_annotation, parse_cells, render_grid, render_svg, Annotation, GuardReport};
use dispersive::oracle::{exact_max_dispersion, OracleBudget};
use dispersive::treedp::solve_tree;
use dispersive::worstcase::solve_worstcase;
use dispersive::{random_simple, random_tree, verify, Dispersion, Error, GuardSet, Polyomino};

#[derive(Parser)]
#[command(name = "dispersive", version, about = "Dispersive vertex guarding of polyominoes")]
struct Cli {
    /// Also draw the shape (and guards, if any) to this SVG file.
    #[arg(long, global = true, value_name = "FILE")]
    svg: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print cell count, vertex count and the simple/thin/tree flags.
    Classify { grid: PathBuf },
    /// Compute a guard set and print a verified report.
    Solve {
        #[arg(value_enum)]
        algorithm: Algorithm,
        grid: PathBuf,
        /// Node limit for the exact search.
        #[arg(long)]
        budget: Option<u64>,
        /// Time limit in seconds for the exact search.
        #[arg(long, default_value_t = 600)]
        time_limit: u64,
    },
    /// Check coverage and dispersion of a guard file.
    Verify {
        grid: PathBuf,
        guards: PathBuf,
        /// Required dispersion: an integer or `inf`.
        #[arg(long, value_name = "L")]
        min_dispersion: Option<String>,
        /// JSON file `{"cells":[[x,y],...]}` of cells covered from outside.
        #[arg(long, value_name = "FILE")]
        pre_covered: Option<PathBuf>,
    },
    /// Print a gadget shape as a grid; ports go to stderr.
    Gadget {
        /// variable, clause2, clause3, duplicator, connector-l, connector-z or corridor
        name: String,
        /// Clause stretch, or corridor length.
        #[arg(long, default_value_t = 0)]
        stretch: u32,
    },
    /// Build the polyomino for a formula and layout and print it as a grid.
    Compose { formula: PathBuf, layout: PathBuf },
    /// Build the guard set for an assignment and verify it at distance 5.
    Witness {
        formula: PathBuf,
        layout: PathBuf,
        /// `01110`, `0 1 1 1 0` or a file containing either.
        assignment: String,
    },
    /// Print a random polyomino as a grid.
    Gen {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        cells: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Worstcase,
    Tree,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Simple,
    Tree,
}

enum Failure {
    Input(String),
    Timeout(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Timeout { .. } => Failure::Timeout(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_grid(path: &Path) -> Result<Polyomino, Failure> {
    Polyomino::from_grid(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn instance_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn write_svg(target: &Option<PathBuf>, poly: &Polyomino, guards: &GuardSet, extra: Vec<Annotation>) -> Result<(), Failure> {
    if let Some(path) = target {
        let mut notes = extra;
        notes.extend(dispersion_annotation(guards, poly));
        fs::write(path, render_svg(poly, guards, &notes)).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn parse_dispersion(s: &str) -> Result<Dispersion, Failure> {
    if s == "inf" {
        return Ok(Dispersion::Infinite);
    }
    s.parse().map(Dispersion::Finite).map_err(|_| Failure::Input(format!("dispersion must be an integer or inf, got {s:?}")))
}

fn report(
    instance: String,
    algorithm: &str,
    guards: &GuardSet,
    poly: &Polyomino,
    elapsed: Duration,
) -> Result<(GuardReport, dispersive::VerifyReport), Failure> {
    let check = verify(guards, poly, Dispersion::Finite(1), &[])?;
    let mut r = GuardReport::from_guards(guards);
    r.instance = Some(instance);
    r.algorithm = Some(algorithm.to_string());
    r.dispersion = Some(check.dispersion);
    r.covered = Some(check.covered);
    r.elapsed_us = Some(elapsed.as_micros() as u64);
    Ok((r, check))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Classify { grid } => {
            let p = read_grid(&grid)?;
            let c = p.classify();
            let out = json!({
                "cells": p.len(),
                "vertices": p.vertices().len(),
                "holes": p.boundary_cycles().len() - 1,
                "simple": c.simple,
                "thin": c.thin,
                "tree_shaped": c.tree_shaped,
            });
            println!("{out}");
            write_svg(&cli.svg, &p, &GuardSet::default(), Vec::new())?;
            Ok(true)
        }
        Command::Solve { algorithm, grid, budget, time_limit } => {
            let p = read_grid(&grid)?;
            let started = Instant::now();
            let (tag, guards, required) = match algorithm {
                Algorithm::Worstcase => {
                    let sol = solve_worstcase(&p, None)?;
                    ("worstcase", sol.guards, Dispersion::Finite(3))
                }
                Algorithm::Tree => {
                    let (d, g) = solve_tree(&p)?;
                    ("tree", g, d)
                }
                Algorithm::Exact => {
                    let mut b = OracleBudget { time_limit: Duration::from_secs(time_limit), ..Default::default() };
                    if let Some(n) = budget {
                        b.node_limit = n;
                    }
                    let sol = exact_max_dispersion(&p, &[], b)?;
                    ("exact", sol.witness, sol.best)
                }
            };
            let (r, check) = report(instance_name(&grid), tag, &guards, &p, started.elapsed())?;
            print!("{}", r.to_json());
            write_svg(&cli.svg, &p, &guards, Vec::new())?;
            Ok(check.covered && check.dispersion >= required)
        }
        Command::Verify { grid, guards, min_dispersion, pre_covered } => {
            let p = read_grid(&grid)?;
            let g = GuardReport::parse(&read(&guards)?)?.guard_set();
            let pre = match pre_covered {
                Some(path) => parse_cells(&read(&path)?)?,
                None => Vec::new(),
            };
            let need = match min_dispersion {
                Some(s) => parse_dispersion(&s)?,
                None => Dispersion::Finite(0),
            };
            let check = verify(&g, &p, need, &pre)?;
            let mut r = GuardReport::from_guards(&g);
            r.dispersion = Some(check.dispersion);
            r.covered = Some(check.covered);
            print!("{}", r.to_json());
            write_svg(&cli.svg, &p, &g, Vec::new())?;
            Ok(check.ok)
        }
        Command::Gadget { name, stretch } => {
            let bp = GadgetKind::from_name(&name, stretch)?.blueprint()?;
            println!("{}", render_grid(&bp.shape));
            for port in &bp.ports {
                eprintln!("port {} cell ({},{}) facing {}", port.name, port.cell.x, port.cell.y, port.dir);
            }
            let marks = bp.marked_cells.iter().map(|(_, c)| Annotation::Cell { cell: *c, class: "mark".into() }).collect();
            write_svg(&cli.svg, &bp.shape, &GuardSet::default(), marks)?;
            Ok(true)
        }
        Command::Compose { formula, layout } => {
            let f = Formula::parse(&read(&formula)?)?;
            let l = Layout::parse(&read(&layout)?)?;
            let comp = compose(&f, &l)?;
            println!("{}", render_grid(&comp.poly));
            write_svg(&cli.svg, &comp.poly, &GuardSet::default(), Vec::new())?;
            Ok(true)
        }
        Command::Witness { formula, layout, assignment } => {
            let f = Formula::parse(&read(&formula)?)?;
            let l = Layout::parse(&read(&layout)?)?;
            let text = if Path::new(&assignment).is_file() { read(Path::new(&assignment))? } else { assignment };
            let values = parse_assignment(&text)?;
            if values.len() != f.vars {
                return Err(Failure::Input(format!("assignment has {} values for {} variables", values.len(), f.vars)));
            }
            let started = Instant::now();
            let comp = compose(&f, &l)?;
            let w = comp.witness(&values, OracleBudget::default())?;
            let (r, check) = report(instance_name(&layout), "witness", &w.guards, &comp.poly, started.elapsed())?;
            print!("{}", r.to_json());
            for j in &w.unsatisfied {
                eprintln!("{}", Error::UnsatisfiedClause(*j));
            }
            write_svg(&cli.svg, &comp.poly, &w.guards, Vec::new())?;
            Ok(w.unsatisfied.is_empty() && check.covered && check.dispersion >= Dispersion::Finite(5))
        }
        Command::Gen { family, cells, seed } => {
            let p = match family {
                Family::Simple => random_simple(seed, cells)?,
                Family::Tree => random_tree(seed, cells)?,
            };
            println!("{}", render_grid(&p));
            write_svg(&cli.svg, &p, &GuardSet::default(), Vec::new())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Timeout(msg)) => {
            eprintln!("timeout: {msg}");
            ExitCode::from(3)
        }
    }
}
