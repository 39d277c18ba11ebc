use std::io::{IsTerminal, Write};
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bmc_core::diagnostic::WireDiagnostic;
use bmc_core::export::{to_dot, to_json, to_svg};
use bmc_core::rules::RelationshipPolicy;
use bmc_core::{
    check_source, dsl, has_errors, select_business_model, Diagnostic, ElementKind, SelectError,
    Severity, SourceFormat,
};
use bmc_service::{ServiceConfig, DEFAULT_BODY_LIMIT};
use clap::{Parser, Subcommand, ValueEnum};

const OK: u8 = 0;
const FAILED: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "bmc", version, about = "Business Model Canvas toolchain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Dsl,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    Dot,
    Svg,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Table,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a model
    Check {
        path: PathBuf,
        /// Print diagnostics as JSON on stdout
        #[arg(long)]
        json: bool,
        /// Skip warnings
        #[arg(long)]
        no_lint: bool,
        /// Exit 1 on warnings too
        #[arg(long)]
        deny_warnings: bool,
        /// Override detection by extension
        #[arg(long, value_enum)]
        input: Option<InputFormat>,
    },
    /// Print, rewrite or check canonical formatting
    Fmt {
        path: PathBuf,
        #[arg(long, conflicts_with = "check")]
        write: bool,
        #[arg(long)]
        check: bool,
    },
    /// Emit DOT, SVG or JSON
    Render {
        path: PathBuf,
        #[arg(long, value_enum)]
        format: RenderFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Business model to draw (dot/svg)
        #[arg(long)]
        bm: Option<String>,
        #[arg(long, value_enum)]
        input: Option<InputFormat>,
    },
    /// Show the policy entry for a source and target kind
    Infer { src: String, dst: String },
    /// Print the full relationship policy
    Matrix {
        #[arg(long, value_enum, default_value = "table")]
        format: MatrixFormat,
    },
    /// Run the HTTP API
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Address to listen on; anything but loopback exposes an
        /// unauthenticated API
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        bind: IpAddr,
        /// Largest accepted request body in bytes
        #[arg(long, default_value_t = DEFAULT_BODY_LIMIT)]
        body_limit: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Check {
            path,
            json,
            no_lint,
            deny_warnings,
            input,
        } => check(&path, json, !no_lint, deny_warnings, input),
        Command::Fmt { path, write, check } => fmt(&path, write, check),
        Command::Render {
            path,
            format,
            output,
            bm,
            input,
        } => render(&path, format, output.as_deref(), bm.as_deref(), input),
        Command::Infer { src, dst } => infer(&src, &dst),
        Command::Matrix { format } => matrix(format),
        Command::Serve {
            port,
            bind,
            body_limit,
        } => serve(SocketAddr::new(bind, port), ServiceConfig { body_limit }),
    };
    ExitCode::from(code)
}

fn read(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|err| {
        eprintln!("error: cannot read {}: {err}", path.display());
        USAGE
    })
}

fn source_format(path: &Path, input: Option<InputFormat>) -> SourceFormat {
    match input {
        Some(InputFormat::Dsl) => SourceFormat::Dsl,
        Some(InputFormat::Json) => SourceFormat::Json,
        None => SourceFormat::from_path(path),
    }
}

fn color() -> bool {
    std::env::var_os("BMC_NO_COLOR").is_none() && std::io::stderr().is_terminal()
}

fn print_diagnostics(diagnostics: &[Diagnostic], path: &Path, text: &str) {
    let color = color();
    let file = path.display().to_string();
    let mut err = std::io::stderr().lock();
    for d in diagnostics {
        let line = d.render_line(&file, text);
        if color {
            let paint = match d.severity {
                Severity::Error => "\x1b[31m",
                Severity::Warning => "\x1b[33m",
            };
            let (head, rest) = line.split_once(' ').unwrap_or((&line, ""));
            let _ = writeln!(err, "{paint}{head}\x1b[0m {rest}");
        } else {
            let _ = writeln!(err, "{line}");
        }
    }
}

fn check(path: &Path, json: bool, lints: bool, deny_warnings: bool, input: Option<InputFormat>) -> u8 {
    let text = match read(path) {
        Ok(text) => text,
        Err(code) => return code,
    };
    let (_, diagnostics) = check_source(&text, source_format(path, input), lints);
    if json {
        let wire: Vec<WireDiagnostic> = diagnostics.iter().map(Diagnostic::to_wire).collect();
        println!("{}", serde_json::to_string_pretty(&wire).expect("plain data"));
    } else {
        print_diagnostics(&diagnostics, path, &text);
    }
    if has_errors(&diagnostics) || (deny_warnings && !diagnostics.is_empty()) {
        FAILED
    } else {
        OK
    }
}

fn fmt(path: &Path, write: bool, check: bool) -> u8 {
    let text = match read(path) {
        Ok(text) => text,
        Err(code) => return code,
    };
    let (enterprise, diagnostics) = dsl::parse_source(&text);
    if has_errors(&diagnostics) {
        print_diagnostics(&diagnostics, path, &text);
        return USAGE;
    }
    let formatted = dsl::format(&enterprise);
    if check {
        if formatted == text {
            return OK;
        }
        let name = path.display().to_string();
        let diff = similar::TextDiff::from_lines(&text, &formatted);
        print!(
            "{}",
            diff.unified_diff()
                .header(&name, &format!("{name} (formatted)"))
        );
        return FAILED;
    }
    if write {
        if formatted != text {
            if let Err(err) = std::fs::write(path, &formatted) {
                eprintln!("error: cannot write {}: {err}", path.display());
                return USAGE;
            }
        }
        return OK;
    }
    print!("{formatted}");
    OK
}

fn render(
    path: &Path,
    format: RenderFormat,
    output: Option<&Path>,
    bm: Option<&str>,
    input: Option<InputFormat>,
) -> u8 {
    let text = match read(path) {
        Ok(text) => text,
        Err(code) => return code,
    };
    let (enterprise, diagnostics) = check_source(&text, source_format(path, input), false);
    if has_errors(&diagnostics) {
        print_diagnostics(&diagnostics, path, &text);
        return FAILED;
    }
    let rendered = match format {
        RenderFormat::Json => to_json(&enterprise),
        RenderFormat::Dot | RenderFormat::Svg => match select_business_model(&enterprise, bm) {
            Ok(bm) if matches!(format, RenderFormat::Dot) => to_dot(bm),
            Ok(bm) => to_svg(bm),
            Err(err) => {
                eprintln!("error: {err}");
                if matches!(err, SelectError::Ambiguous(_)) {
                    eprintln!("hint: pass --bm NAME");
                }
                return USAGE;
            }
        },
    };
    match output {
        Some(out) => {
            if let Err(err) = std::fs::write(out, rendered) {
                eprintln!("error: cannot write {}: {err}", out.display());
                return USAGE;
            }
        }
        None => print!("{rendered}"),
    }
    OK
}

fn kind(token: &str) -> Result<ElementKind, u8> {
    ElementKind::from_token(token).ok_or_else(|| {
        eprintln!("error: unknown element kind `{token}` (use a kind name such as `key_resource` or an abbreviation such as `KR`)");
        USAGE
    })
}

fn infer(src: &str, dst: &str) -> u8 {
    let (src, dst) = match (kind(src), kind(dst)) {
        (Ok(src), Ok(dst)) => (src, dst),
        _ => return USAGE,
    };
    println!("{}", RelationshipPolicy::normative().entry(src, dst));
    OK
}

fn matrix(format: MatrixFormat) -> u8 {
    let policy = RelationshipPolicy::normative();
    match format {
        MatrixFormat::Csv => {
            for row in policy.csv_rows() {
                println!("{row}");
            }
        }
        MatrixFormat::Table => {
            let mut header = format!("{:<6}", "");
            for k in ElementKind::ALL {
                header.push_str(&format!("{:<4}", k.abbrev()));
            }
            println!("{}", header.trim_end());
            for src in ElementKind::ALL {
                let mut line = format!("{:<6}", src.abbrev());
                for dst in ElementKind::ALL {
                    line.push_str(&format!("{:<4}", policy.entry(src, dst).cell()));
                }
                println!("{}", line.trim_end());
            }
        }
    }
    OK
}

fn serve(addr: SocketAddr, config: ServiceConfig) -> u8 {
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(err) => {
            eprintln!("error: {err}");
            return USAGE;
        }
    };
    runtime.block_on(async {
        let listener = match bmc_service::bind(addr).await {
            Ok(listener) => listener,
            Err(err) => {
                eprintln!("error: {err}");
                return USAGE;
            }
        };
        let local = listener.local_addr().unwrap_or(addr);
        println!("listening on http://{local}");
        let _ = std::io::stdout().flush();
        match bmc_service::serve(listener, config).await {
            Ok(()) => OK,
            Err(err) => {
                eprintln!("error: {err}");
                FAILED
            }
        }
    })
}
