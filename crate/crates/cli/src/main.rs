//! `knotforge`: run command scripts, read commands from standard input, or
//! serve the session to the browser viewer.

use std::fs::File;
use std::io::{self, BufRead, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use knotforge_interp::{Flow, Message, Session};

#[derive(Parser, Debug)]
#[command(name = "knotforge", version, about = "Polygonal knot relaxation and diagram engine")]
struct Args {
    /// No graphics: `go` runs to completion and frame-buffer commands do nothing.
    /// Commands are read from standard input after any --script.
    #[arg(long, alias = "nog")]
    nog: bool,

    /// Command file to run first.
    #[arg(long, value_name = "FILE")]
    script: Option<PathBuf>,

    /// Seed for every random command.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Serve the viewer and its WebSocket at this address, e.g. 127.0.0.1:8080.
    #[arg(long, value_name = "ADDR")]
    serve: Option<SocketAddr>,

    /// Append every command line run to FILE, preceded by `seed N`, so the
    /// session can be replayed exactly.
    #[arg(long, value_name = "FILE")]
    record: Option<PathBuf>,
}

fn print(m: &Message) {
    match m {
        Message::Output(t) => println!("{t}"),
        Message::Complaint(t) => eprintln!("{t}"),
    }
}

struct Recorder(Option<File>);

impl Recorder {
    fn line(&mut self, text: &str) {
        if let Some(f) = &mut self.0 {
            if let Err(e) = writeln!(f, "{text}") {
                log::warn!("recording stopped: {e}");
                self.0 = None;
            }
        }
    }
}

fn run(args: Args) -> io::Result<Flow> {
    let headless = args.serve.is_none();
    let mut session = Session::new(args.seed, std::env::current_dir()?, headless);
    let mut rec = Recorder(args.record.as_ref().map(File::create).transpose()?);
    rec.line(&format!("seed {}", args.seed));

    if let Some(path) = &args.script {
        let text = std::fs::read_to_string(path)?;
        for line in text.lines() {
            rec.line(line);
        }
        match session.run_script(&text, print) {
            Flow::Continue => {}
            Flow::Exit => return Ok(Flow::Exit),
            Flow::Die => return Ok(Flow::Die),
        }
    }

    if let Some(addr) = args.serve {
        if args.nog {
            log::warn!("--nog ignored with --serve");
        }
        let rt = tokio::runtime::Runtime::new()?;
        rt.block_on(knotforge_service::serve(session, addr))?;
        return Ok(Flow::Exit);
    }

    let stdin = io::stdin();
    for line in stdin.lock().lines() {
        let line = line?;
        rec.line(&line);
        let r = session.execute(&line);
        r.messages.iter().for_each(print);
        if r.flow != Flow::Continue {
            return Ok(r.flow);
        }
        io::stdout().flush()?;
    }
    // commands still queued by tfunction run before leaving
    Ok(session.run_script("", print))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Args::parse()) {
        Ok(Flow::Die) => ExitCode::FAILURE,
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("knotforge: {e}");
            ExitCode::from(2)
        }
    }
}
