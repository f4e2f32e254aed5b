use clap::Parser;

use kolchin_cli::commands::{self, binding_kind, Cli, Command};
use kolchin_cli::lower::{parse_rational, Context};
use kolchin_cli::session::Session;

fn main() {
    let cli = Cli::parse();

    let offsets: Result<Vec<_>, _> = cli
        .shift
        .split(',')
        .take(cli.base_vars)
        .map(parse_rational)
        .collect();
    let offsets = match offsets {
        Ok(mut o) => {
            // pad with zeros when fewer offsets than base indeterminates
            while o.len() < cli.base_vars {
                o.push(num_rational::BigRational::from_integer(0.into()));
            }
            o
        }
        Err(e) => return bail("context", e),
    };
    let context = match Context::new(cli.vars, cli.derivations, cli.base_vars, offsets) {
        Ok(c) => c,
        Err(e) => return bail("context", e),
    };
    let mut session = match &cli.session {
        Some(path) => match Session::open(path, context) {
            Ok(s) => s,
            Err(e) => return bail("session", e),
        },
        None => Session::ephemeral(context),
    };
    session.record(
        std::env::args()
            .skip(1)
            .collect::<Vec<_>>()
            .join(" "),
    );

    // bind mutates the session, everything else reads it
    let outcome = match &cli.command {
        Command::Bind { name, text, kind } => match binding_kind(kind) {
            Ok(kind) => match session.bind(name, kind, text) {
                Ok(()) => commands::Outcome {
                    value: serde_json::json!({
                        "command": "bind",
                        "status": "ok",
                        "result": { "name": name, "kind": format!("{kind:?}").to_lowercase(), "text": text },
                    }),
                    exit_code: 0,
                },
                Err(e) => commands::error("bind", e),
            },
            Err(e) => commands::error("bind", e),
        },
        _ => commands::run(&cli, &session),
    };

    if let Err(e) = session.save() {
        return bail("session", e);
    }

    if cli.json {
        println!("{}", outcome.value);
    } else {
        println!("{}", serde_json::to_string_pretty(&outcome.value).unwrap());
    }
    std::process::exit(outcome.exit_code);
}

fn bail(stage: &str, err: impl std::fmt::Display) {
    let value = serde_json::json!({
        "command": stage,
        "status": "error",
        "error": err.to_string(),
    });
    println!("{value}");
    std::process::exit(1);
}
