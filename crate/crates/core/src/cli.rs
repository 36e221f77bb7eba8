//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or domain errors, 2 when a
//! certification fails (a zero-divisor witness vanished, or critical cell
//! counts disagree with Betti numbers).

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use serde_json::json;

use crate::error::Error;
use crate::homology::CellComplex;
use crate::morse::{is_critical, Classifier, FollowerThreshold, WheelOrder};
use crate::ring::{generator, multiply_generators, Generator};
use crate::symbols::{enumerate_cells, faces, parse_symbol, Label, StripParams};
use crate::tc::{tc_report, zdcl_certificate, zdcl_search};
use crate::verify::{verify, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CERTIFICATION: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "diskstrip", version, about = "Homology, critical cells, cup products and topological complexity of disks in a strip")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Strip {
    /// Number of disks
    #[arg(short = 'n')]
    n: usize,
    /// Strip width in disk diameters (at least 2)
    #[arg(short = 'w')]
    w: usize,
}

impl Strip {
    fn params(self) -> Result<StripParams, Error> {
        StripParams::new(self.n, self.w)
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args, Debug, Clone, Copy)]
struct Order {
    #[arg(long = "wheel-order", value_enum, default_value_t = OrderArg::SizeAxle)]
    wheel_order: OrderArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum OrderArg {
    SizeAxle,
    Axle,
}

impl From<OrderArg> for WheelOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::SizeAxle => WheelOrder::SizeThenAxle,
            OrderArg::Axle => WheelOrder::AxleOnly,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SuiteArg {
    Quick,
    Full,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the cells of cell(n,w)
    Cells {
        #[command(flatten)]
        strip: Strip,
        #[arg(long, allow_negative_numbers = true)]
        dim: Option<i64>,
        #[command(flatten)]
        output: Output,
    },
    /// Dimension of cell(n,w)
    Dim {
        #[command(flatten)]
        strip: Strip,
    },
    /// Codimension-one faces of a symbol
    Faces {
        /// Symbol such as "3 1|2"
        symbol: String,
        /// Check that the symbol is a cell of cell(n,w) for this width
        #[arg(short = 'w')]
        w: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Betti numbers over GF(2)
    Betti {
        #[command(flatten)]
        strip: Strip,
        /// Print the boundary matrix of this dimension instead
        #[arg(long = "dump-boundary", value_name = "DIM")]
        dump_boundary: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Critical cells, or the classification of one symbol
    Critical {
        #[command(flatten)]
        strip: Strip,
        #[arg(long, allow_negative_numbers = true)]
        dim: Option<i64>,
        /// Explain why this symbol is or is not critical
        #[arg(long)]
        symbol: Option<String>,
        #[command(flatten)]
        order: Order,
        #[command(flatten)]
        output: Output,
    },
    /// Cup product of degree-one generators
    Cup {
        #[command(flatten)]
        strip: Strip,
        /// Factors as "i j;i j;..."
        #[arg(long)]
        factors: String,
        #[command(flatten)]
        order: Order,
        #[command(flatten)]
        output: Output,
    },
    /// Zero-divisor cup length: certificate and search
    Zdcl {
        #[command(flatten)]
        strip: Strip,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
        #[command(flatten)]
        order: Order,
        #[command(flatten)]
        output: Output,
    },
    /// Topological complexity report
    Tc {
        #[command(flatten)]
        strip: Strip,
        #[command(flatten)]
        order: Order,
        #[command(flatten)]
        output: Output,
    },
    /// Run every check over a suite of instances
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::Quick)]
        suite: SuiteArg,
        #[command(flatten)]
        order: Order,
        #[command(flatten)]
        output: Output,
        /// Negative control: require only w labels for a follower and its leader
        #[arg(long, hide = true)]
        tamper_follower_threshold: bool,
    },
}

/// Failure of a single command.
enum Failure {
    Usage(String),
    Domain(Error),
    Certification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Certification(_) | Error::Canonicalization(_) => Failure::Certification(e.to_string()),
            e => Failure::Domain(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("output error: {e}"))
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_ERROR
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
        Err(Failure::Certification(msg)) => {
            let _ = writeln!(err, "certification failure: {msg}");
            EXIT_CERTIFICATION
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Cells { strip, dim, output } => cmd_cells(strip.params()?, dim, output.format, out),
        Command::Dim { strip } => {
            writeln!(out, "{}", strip.params()?.dimension())?;
            Ok(EXIT_OK)
        }
        Command::Faces { symbol, w, output } => cmd_faces(&symbol, w, output.format, out),
        Command::Betti {
            strip,
            dump_boundary,
            output,
        } => cmd_betti(strip.params()?, dump_boundary, output.format, out),
        Command::Critical {
            strip,
            dim,
            symbol,
            order,
            output,
        } => cmd_critical(strip.params()?, dim, symbol, order.wheel_order.into(), output.format, out),
        Command::Cup {
            strip,
            factors,
            order,
            output,
        } => cmd_cup(strip.params()?, &factors, order.wheel_order.into(), output.format, out),
        Command::Zdcl {
            strip,
            budget,
            order,
            output,
        } => cmd_zdcl(strip.params()?, budget, order.wheel_order.into(), output.format, out),
        Command::Tc { strip, order, output } => cmd_tc(strip.params()?, order.wheel_order.into(), output.format, out),
        Command::Verify {
            suite,
            order,
            output,
            tamper_follower_threshold,
        } => {
            let suite = match suite {
                SuiteArg::Quick => Suite::Quick,
                SuiteArg::Full => Suite::Full,
            };
            let threshold = if tamper_follower_threshold {
                FollowerThreshold::Width
            } else {
                FollowerThreshold::WidthPlusOne
            };
            cmd_verify(suite, order.wheel_order.into(), threshold, output.format, out)
        }
    }
}

fn dim_filter(dim: Option<i64>) -> Option<Option<usize>> {
    match dim {
        None => Some(None),
        Some(d) if d < 0 => None,
        Some(d) => Some(Some(d as usize)),
    }
}

fn cmd_cells(p: StripParams, dim: Option<i64>, format: Format, out: &mut dyn Write) -> CmdResult {
    let cells = dim_filter(dim).map_or_else(Vec::new, |d| enumerate_cells(p, d));
    match format {
        Format::Table => {
            for c in &cells {
                writeln!(out, "{c}")?;
            }
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string(&cells).unwrap())?,
        Format::Csv => {
            writeln!(out, "dim,symbol")?;
            for c in &cells {
                writeln!(out, "{},{c}", c.dimension())?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_faces(text: &str, w: Option<usize>, format: Format, out: &mut dyn Write) -> CmdResult {
    let s = parse_symbol(text).map_err(Error::from)?;
    if let Some(w) = w {
        StripParams::new(s.n(), w)?.check_cell(&s)?;
    }
    let fs = faces(&s);
    match format {
        Format::Table => {
            for (f, k) in &fs {
                writeln!(out, "{f}\t{k}")?;
            }
        }
        Format::Json => {
            let v: Vec<_> = fs
                .iter()
                .map(|(f, k)| json!({"face": f.to_string(), "multiplicity": k}))
                .collect();
            writeln!(out, "{}", serde_json::Value::Array(v))?;
        }
        Format::Csv => {
            writeln!(out, "face,multiplicity")?;
            for (f, k) in &fs {
                writeln!(out, "{f},{k}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_betti(p: StripParams, dump: Option<usize>, format: Format, out: &mut dyn Write) -> CmdResult {
    let cx = CellComplex::new(p);
    if let Some(d) = dump {
        write!(out, "{}", cx.boundary(d)?.dump())?;
        return Ok(EXIT_OK);
    }
    let b = cx.betti();
    match format {
        Format::Table => writeln!(out, "{}", b.betti.iter().join(" "))?,
        Format::Json => writeln!(
            out,
            "{}",
            json!({
                "n": p.n(),
                "w": p.w(),
                "betti": b.betti,
                "cells": cx.cell_counts(),
                "euler": cx.euler_characteristic(),
            })
        )?,
        Format::Csv => {
            writeln!(out, "dim,cells,betti")?;
            for (d, (c, k)) in cx.cell_counts().iter().zip(&b.betti).enumerate() {
                writeln!(out, "{d},{c},{k}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_critical(
    p: StripParams,
    dim: Option<i64>,
    symbol: Option<String>,
    order: WheelOrder,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    if let Some(text) = symbol {
        let s = parse_symbol(&text).map_err(Error::from)?;
        p.check_cell(&s)?;
        let c = is_critical(&s, p.w(), order);
        match format {
            Format::Json => writeln!(
                out,
                "{}",
                json!({"symbol": s.to_string(), "critical": c.critical, "reasons": c.reasons()})
            )?,
            _ => {
                writeln!(out, "{s}: {}", if c.critical { "critical" } else { "not critical" })?;
                for r in c.reasons() {
                    writeln!(out, "  {r}")?;
                }
            }
        }
        return Ok(EXIT_OK);
    }
    let cells = match dim_filter(dim) {
        Some(d) => Classifier::new(order).critical_cells(p, d),
        None => Vec::new(),
    };
    match format {
        Format::Table => {
            for c in &cells {
                let tag = if c.follower_free() { "follower-free" } else { "follower" };
                writeln!(out, "{}\t{c}\t{tag}", c.dimension())?;
            }
        }
        Format::Json => {
            let v: Vec<_> = cells
                .iter()
                .map(|c| json!({"dim": c.dimension(), "symbol": c.to_string(), "follower_free": c.follower_free()}))
                .collect();
            writeln!(out, "{}", serde_json::Value::Array(v))?;
        }
        Format::Csv => {
            writeln!(out, "dim,symbol,follower_free")?;
            for c in &cells {
                writeln!(out, "{},{c},{}", c.dimension(), c.follower_free())?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `"i j;i j;..."`.
fn parse_factors(text: &str) -> Result<Vec<(Label, Label)>, Failure> {
    let bad = |part: &str| Failure::Usage(format!("malformed factor {part:?}; expected \"i j;i j;...\""));
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|part| {
            let nums: Vec<&str> = part.split_whitespace().collect();
            match nums[..] {
                [i, j] => Ok((i.parse().map_err(|_| bad(part))?, j.parse().map_err(|_| bad(part))?)),
                _ => Err(bad(part)),
            }
        })
        .collect()
}

fn cmd_cup(p: StripParams, factors: &str, order: WheelOrder, format: Format, out: &mut dyn Write) -> CmdResult {
    let pairs = parse_factors(factors)?;
    let gens = pairs
        .iter()
        .map(|&(i, j)| generator(i, j, p, order))
        .collect::<Result<Vec<Generator>, _>>()?;
    let product = multiply_generators(&gens, p)?;
    match format {
        Format::Table => writeln!(out, "{product}")?,
        Format::Json => {
            let terms: Vec<String> = product.terms().iter().rev().map(|c| c.to_string()).collect();
            writeln!(
                out,
                "{}",
                json!({
                    "factors": gens.iter().map(|g| g.cell().to_string()).collect::<Vec<_>>(),
                    "degree": product.degree(),
                    "terms": terms,
                })
            )?;
        }
        Format::Csv => {
            writeln!(out, "term")?;
            for c in product.terms().iter().rev() {
                writeln!(out, "{c}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_zdcl(p: StripParams, budget: usize, order: WheelOrder, format: Format, out: &mut dyn Write) -> CmdResult {
    let cert = zdcl_certificate(p, order)?;
    let search = zdcl_search(p, order, budget)?;
    let witness: Vec<[String; 2]> = cert
        .witness
        .iter()
        .rev()
        .map(|(a, b)| [a.to_string(), b.to_string()])
        .collect();
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            json!({
                "n": p.n(),
                "w": p.w(),
                "zdcl": cert.length,
                "witness": witness,
                "search": {
                    "length": search.length,
                    "complete": search.complete,
                    "nodes": search.nodes,
                    "factors": search.factors.iter().map(|(i, j)| format!("{i} {j}")).collect::<Vec<_>>(),
                },
            })
        )?,
        _ => {
            writeln!(out, "zdcl {}", cert.length)?;
            writeln!(out, "witness {}", cert.product)?;
            writeln!(
                out,
                "search {} ({}, {} nodes)",
                search.length,
                if search.complete { "complete" } else { "incomplete" },
                search.nodes
            )?;
        }
    }
    if search.length < cert.length && search.complete {
        return Err(Failure::Certification(format!(
            "search found only length {} below certificate length {}",
            search.length, cert.length
        )));
    }
    Ok(EXIT_OK)
}

fn cmd_tc(p: StripParams, order: WheelOrder, format: Format, out: &mut dyn Write) -> CmdResult {
    let r = tc_report(p, order)?;
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&r).unwrap())?,
        Format::Table => {
            writeln!(out, "n {} w {} m {} dim {}", r.n, r.w, r.m, r.dim)?;
            writeln!(out, "branch {}", r.branch)?;
            writeln!(out, "tc_lower {} tc_upper {}", r.lower, r.upper)?;
            match r.value {
                Some(v) => writeln!(out, "tc {v}")?,
                None => writeln!(out, "tc unknown")?,
            }
            writeln!(out, "certified {}", r.certified)?;
        }
        Format::Csv => {
            writeln!(out, "n,w,m,dim,zdcl,tc_lower,tc_upper,tc,branch,certified")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.n,
                r.w,
                r.m,
                r.dim,
                r.zdcl,
                r.lower,
                r.upper,
                r.value.map_or(String::new(), |v| v.to_string()),
                r.branch,
                r.certified
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(
    suite: Suite,
    order: WheelOrder,
    threshold: FollowerThreshold,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let report = verify(suite, order, threshold);
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&report).unwrap())?,
        Format::Table | Format::Csv => {
            for i in &report.instances {
                let orders = i
                    .orders
                    .iter()
                    .map(|o| format!("{}={}", o.order, if o.matches_betti { "ok" } else { "MISMATCH" }))
                    .join(" ");
                writeln!(
                    out,
                    "{} ({},{}) cells {} betti [{}] dd=0 {} euler {} {} zdcl {} tc {}{}",
                    if i.passed() { "PASS" } else { "FAIL" },
                    i.n,
                    i.w,
                    i.cells,
                    i.betti.iter().join(" "),
                    i.boundary_squared_zero,
                    i.euler_ok,
                    orders,
                    i.zdcl.map_or("-".into(), |z| z.to_string()),
                    i.tc.map_or("-".into(), |t| t.to_string()),
                    if i.errors.is_empty() {
                        String::new()
                    } else {
                        format!(" errors: {}", i.errors.join("; "))
                    }
                )?;
            }
            let passed = report.instances.iter().filter(|i| i.passed()).count();
            writeln!(
                out,
                "{} suite: {passed}/{} instances passed; wheel orders validating every instance: {}",
                report.suite,
                report.instances.len(),
                if report.validating_orders.is_empty() {
                    "none".to_string()
                } else {
                    report.validating_orders.join(", ")
                }
            )?;
        }
    }
    Ok(if report.certification_failed() {
        EXIT_CERTIFICATION
    } else if report.passed() {
        EXIT_OK
    } else {
        EXIT_ERROR
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_lists() {
        assert_eq!(parse_factors("4 2;4 1").ok(), Some(vec![(4, 2), (4, 1)]));
        assert_eq!(parse_factors(" 5 2 ; 4 1 ").ok(), Some(vec![(5, 2), (4, 1)]));
        assert!(parse_factors("4;4 1").is_err());
        assert!(parse_factors("4 2 1").is_err());
        assert!(parse_factors("a b").is_err());
        assert_eq!(parse_factors("").ok(), Some(vec![]));
    }
}
