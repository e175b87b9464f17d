//! Command-line front end. [`run`] does the work and returns the text to
//! print with the exit code, so it can be driven from tests.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::atlas::{build_atlas_with, Atlas, AtlasJson, AtlasOptions};
use crate::element::{ElementJson, ToricElement};
use crate::error::{Result, ToricError};
use crate::fan::{hirzebruch_fan, projective_fan, torus_fan, Fan, FanSpec, FanSpecError};
use crate::padic::PAdicContext;
use crate::reduction::reduction_json;
use crate::render::{render_svg, RenderOptions};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(name = "toric-rigid", version, about = "Toric rigid spaces from fans of rational cones")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RunConfig {
    /// Residue characteristic of K = Q_p.
    #[arg(long, global = true, default_value_t = 5)]
    pub prime: u64,
    /// Multiplicity bound for decomposition searches.
    #[arg(long, global = true, default_value_t = crate::semigroup::DEFAULT_MULTIPLICITY_BOUND)]
    pub bound: u32,
    /// Box radius for overlap certificate searches (derived from the input
    /// when omitted).
    #[arg(long = "box", global = true)]
    pub box_radius: Option<i64>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Build on one thread.
    #[arg(long, global = true)]
    pub serial: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the fan axioms; prints the face-complete fan or the violations.
    Validate { fan: PathBuf },
    /// Build the chart atlas with overlap data and separatedness certificates.
    Atlas { fan: PathBuf },
    /// Reduce the atlas mod p and compare with the toric scheme.
    Reduce { fan: PathBuf },
    /// Draw a rank-2 fan as SVG.
    Render {
        fan: PathBuf,
        #[arg(long, default_value_t = 512)]
        size: u32,
        #[arg(long, default_value_t = 32)]
        margin: u32,
    },
    /// Gauss norm of an element.
    Norm { element: PathBuf },
    /// Product of two elements.
    Multiply { left: PathBuf, right: PathBuf },
    /// Print one of the standard fans as a fan file.
    Example {
        #[command(subcommand)]
        which: Example,
    },
    /// Run seeded randomized checks of the core identities.
    Check {
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum Example {
    Projective { n: usize },
    Hirzebruch { a: i64 },
    Torus { n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome { text, code: 0 }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| ToricError::Io(format!("{}: {e}", path.display())))
}

/// Indented JSON with arrays of scalars kept on one line.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let value = serde_json::to_value(value).map_err(|e| ToricError::internal(e.to_string()))?;
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    Ok(out)
}

fn write_value(value: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match value {
        Value::Array(items) if items.iter().all(|v| !v.is_array() && !v.is_object()) => {
            out.push_str(&Value::Array(items.clone()).to_string());
        }
        Value::Array(items) if items.iter().all(|v| matches!(v, Value::Array(inner) if inner.iter().all(Value::is_number))) => {
            out.push_str(&Value::Array(items.clone()).to_string());
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(v, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(v, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

#[derive(Serialize)]
struct ViolationReport<'a> {
    valid: bool,
    violations: &'a [crate::fan::Violation],
}

/// Reads a fan file; a failed validation becomes the exit-1 outcome.
fn load_fan(path: &Path) -> Result<std::result::Result<Fan, Outcome>> {
    let spec: FanSpec = serde_json::from_str(&read(path)?)?;
    match spec.to_fan() {
        Ok(fan) => Ok(Ok(fan)),
        Err(FanSpecError::Invalid(e)) => Err(e),
        Err(FanSpecError::Violations(v)) => Ok(Err(Outcome {
            text: to_json(&ViolationReport {
                valid: false,
                violations: &v,
            })?,
            code: 1,
        })),
    }
}

fn load_element(path: &Path) -> Result<ToricElement> {
    let json: ElementJson = serde_json::from_str(&read(path)?)?;
    ToricElement::from_json(&json)
}

fn atlas_for(fan: &Fan, config: &RunConfig) -> Result<Atlas> {
    build_atlas_with(
        fan,
        AtlasOptions {
            bound: config.bound,
            radius: config.box_radius,
            parallel: !config.serial,
        },
    )
}

#[derive(Serialize)]
struct AtlasOutput {
    prime: u64,
    #[serde(flatten)]
    atlas: AtlasJson,
}

fn check_config(config: &RunConfig) -> Result<()> {
    PAdicContext::new(config.prime)?;
    if config.bound == 0 || config.box_radius.is_some_and(|r| r <= 0) {
        return Err(ToricError::domain("search bounds must be positive"));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let config = &cli.config;
    check_config(config)?;
    let outcome = match &cli.command {
        Command::Validate { fan } => match load_fan(fan)? {
            Ok(fan) => Outcome::ok(to_json(&fan.to_spec())?),
            Err(report) => report,
        },
        Command::Atlas { fan } => match load_fan(fan)? {
            Ok(fan) => {
                let atlas = atlas_for(&fan, config)?;
                Outcome::ok(to_json(&AtlasOutput {
                    prime: config.prime,
                    atlas: atlas.to_json(),
                })?)
            }
            Err(report) => report,
        },
        Command::Reduce { fan } => match load_fan(fan)? {
            Ok(fan) => {
                let atlas = atlas_for(&fan, config)?;
                Outcome::ok(to_json(&reduction_json(&atlas, config.prime)?)?)
            }
            Err(report) => report,
        },
        Command::Render { fan, size, margin } => match load_fan(fan)? {
            Ok(fan) => Outcome::ok(render_svg(
                &fan,
                RenderOptions {
                    size: *size,
                    margin: *margin,
                },
            )?),
            Err(report) => report,
        },
        Command::Norm { element } => Outcome::ok(format!("{}\n", load_element(element)?.gauss_norm())),
        Command::Multiply { left, right } => {
            let product = load_element(left)?.multiply(&load_element(right)?)?;
            Outcome::ok(to_json(&product.to_json())?)
        }
        Command::Example { which } => {
            let fan = match which {
                Example::Projective { n } => projective_fan(*n)?,
                Example::Hirzebruch { a } => hirzebruch_fan(*a)?,
                Example::Torus { n } => torus_fan(*n),
            };
            Outcome::ok(to_json(&fan.to_spec())?)
        }
        Command::Check { count } => checks::run(config.seed, *count, config.bound)?,
    };
    if let Some(path) = &config.output {
        fs::write(path, &outcome.text).map_err(|e| ToricError::Io(format!("{}: {e}", path.display())))?;
        return Ok(Outcome {
            text: String::new(),
            code: outcome.code,
        });
    }
    Ok(outcome)
}

mod checks {
    use super::Outcome;
    use crate::cone::{cone_sum, dual_cone, intersect};
    use crate::error::Result;
    use crate::padic::PAdicContext;
    use crate::random::{random_element, random_prime, random_semigroup, random_strongly_convex_cone, rng};
    use rand::Rng;

    pub fn run(seed: u64, count: usize, bound: u32) -> Result<Outcome> {
        let mut r = rng(seed);
        let mut lines = Vec::new();
        let mut failed = false;
        let mut report = |name: &str, ok: bool| {
            failed |= !ok;
            lines.push(format!("{} {name}", if ok { "ok  " } else { "FAIL" }));
        };

        let ok = (0..count).all(|_| {
            let rank = r.gen_range(1..=4);
            let c = random_strongly_convex_cone(&mut r, rank, 5);
            dual_cone(&dual_cone(&c)) == c
        });
        report("double dual is the identity", ok);

        let mut ok = true;
        for _ in 0..count {
            let rank = r.gen_range(1..=3);
            let a = random_strongly_convex_cone(&mut r, rank, 5);
            let b = random_strongly_convex_cone(&mut r, rank, 5);
            ok &= cone_sum(&dual_cone(&a), &dual_cone(&b))? == dual_cone(&intersect(&a, &b)?);
        }
        report("sum of duals is the dual of the intersection", ok);

        let mut ok = true;
        for _ in 0..count {
            let s = random_semigroup(&mut r);
            let ctx = PAdicContext::new(random_prime(&mut r))?;
            let f = random_element(&mut r, ctx, &s, 8, (-3, 3))?;
            let g = random_element(&mut r, ctx, &s, 8, (-3, 3))?;
            let fg = f.multiply(&g)?;
            ok &= !fg.is_zero()
                && fg.gauss_norm() == f.gauss_norm() * g.gauss_norm()
                && fg.leading_exponent()? == &f.leading_exponent()? + &g.leading_exponent()?;
        }
        report("Gauss norm is multiplicative and leading exponents add", ok);

        let mut ok = true;
        for _ in 0..count {
            let rank = r.gen_range(1..=3);
            let s = crate::semigroup::semigroup_of_cone(&random_strongly_convex_cone(&mut r, rank, 4))?;
            for (i, g) in s.generators().iter().enumerate() {
                let others: Vec<_> = s
                    .generators()
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, h)| h.clone())
                    .collect();
                let d = crate::semigroup::Decomposer::new(rank, &others)?;
                ok &= matches!(d.decompose(g, bound), Ok(None));
            }
        }
        report("semigroup generators are irredundant", ok);

        let mut text = format!("seed {seed}, {count} samples per check\n");
        for l in lines {
            text.push_str(&l);
            text.push('\n');
        }
        Ok(Outcome {
            text,
            code: if failed { 1 } else { 0 },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("toric-rigid").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn example_fans_validate() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p2.json");
        let out = run(&cli(&["example", "projective", "2"])).unwrap();
        fs::write(&path, &out.text).unwrap();
        let again = run(&cli(&["validate", path.to_str().unwrap()])).unwrap();
        assert_eq!(again.code, 0);
        assert_eq!(again.text, out.text);
    }

    #[test]
    fn bad_prime_is_a_domain_error() {
        let e = run(&cli(&["--prime", "6", "example", "torus", "2"])).unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn checks_pass() {
        let out = run(&cli(&["check", "--count", "5"])).unwrap();
        assert_eq!(out.code, 0, "{}", out.text);
    }
}
