//! Line-oriented token game. Reads commands until `quit` or end of input.

use std::io::{self, BufRead, Write};

use pnverify_core::dsl::format_marking;
use pnverify_core::simulate::TokenGame;
use pnverify_core::Net;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const HELP: &str = "commands: <transition name or number>, undo, reset, auto <k>, trace, help, quit";

fn show(game: &TokenGame<'_>, out: &mut impl Write) -> io::Result<()> {
    let net = game.net();
    writeln!(out, "marking: {}", format_marking(net, game.marking()))?;
    let enabled = game.enabled();
    if enabled.is_empty() {
        writeln!(out, "deadlock: no enabled transitions")
    } else {
        let list: Vec<String> =
            enabled.iter().enumerate().map(|(i, &t)| format!("{}) {}", i + 1, net.transition_name(t))).collect();
        writeln!(out, "enabled: {}", list.join("  "))
    }
}

pub fn run(net: &Net, seed: u64, input: impl BufRead, mut out: impl Write) -> io::Result<()> {
    let mut game = TokenGame::new(net);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    writeln!(out, "token game on {} (seed {seed}); {HELP}", net.name())?;
    show(&game, &mut out)?;
    for line in input.lines() {
        let line = line?;
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] => continue,
            ["quit" | "exit"] => break,
            ["help"] => {
                writeln!(out, "{HELP}")?;
                continue;
            }
            ["trace"] => {
                let names: Vec<&str> = game.trace().into_iter().map(|t| net.transition_name(t)).collect();
                writeln!(out, "trace: {}", names.join(" "))?;
                continue;
            }
            ["undo"] => match game.undo() {
                Some(t) => writeln!(out, "undid {}", net.transition_name(t))?,
                None => writeln!(out, "nothing to undo")?,
            },
            ["reset"] => game.reset(),
            ["auto", k] => match k.parse::<usize>() {
                Ok(k) => match game.auto(k, &mut rng) {
                    Ok(fired) => {
                        let names: Vec<&str> = fired.iter().map(|&t| net.transition_name(t)).collect();
                        writeln!(out, "fired: {}", names.join(" "))?;
                    }
                    Err(e) => writeln!(out, "{e}")?,
                },
                Err(_) => {
                    writeln!(out, "auto needs a number of steps")?;
                    continue;
                }
            },
            [what] => {
                if let Err(e) = game.fire_named(what) {
                    writeln!(out, "{e}")?;
                    continue;
                }
            }
            _ => {
                writeln!(out, "unrecognised command; {HELP}")?;
                continue;
            }
        }
        show(&game, &mut out)?;
    }
    out.flush()
}
