//! `keyless` command-line tool.
//!
//! Exit codes: 0 on success, 2 on usage errors, otherwise the code of the
//! failing error as listed on [`keyless_core::Error::exit_code`].

use std::fs::{self, File};
use std::io::{self, BufRead, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use keyless_core::{
    decode_frame, decrypt_message, encode_frame, encrypt_message, kat, receive_message,
    send_message_with_nonce, Credentials, Error, MemristorImage, NonceMode, NonceStore, Result,
};

#[derive(Parser)]
#[command(
    name = "keyless",
    version,
    about = "Keyless encryption with a shared memristor image"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a memristor image file from a 64-bit seed.
    Lutgen {
        /// Seed, decimal or 0x-prefixed hex.
        #[arg(long, value_parser = parse_seed)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encrypt a file into a single frame.
    Encrypt {
        #[command(flatten)]
        secrets: SecretArgs,
        #[command(flatten)]
        rn: RnArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a frame file.
    Decrypt {
        #[command(flatten)]
        secrets: SecretArgs,
        #[arg(long = "in")]
        input: PathBuf,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encrypt and send one message over TCP.
    Send {
        #[command(flatten)]
        secrets: SecretArgs,
        #[command(flatten)]
        rn: RnArgs,
        #[arg(
            long = "in",
            required_unless_present = "message",
            conflicts_with = "message"
        )]
        input: Option<PathBuf>,
        /// Inline plaintext instead of --in.
        #[arg(long)]
        message: Option<String>,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long)]
        port: u16,
    },
    /// Accept one TCP connection and decrypt the message it carries.
    Recv {
        #[command(flatten)]
        secrets: SecretArgs,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Port to listen on; 0 picks a free port (reported on stderr).
        #[arg(long)]
        port: u16,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the known-answer vector file.
    Kat {
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SecretArgs {
    /// Memristor image file.
    #[arg(long)]
    lut: PathBuf,
    /// Device identifier.
    #[arg(long)]
    id: String,
    #[command(flatten)]
    pw: PwArgs,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PwArgs {
    /// Shared password.
    #[arg(long)]
    pw: Option<String>,
    /// Read the password from this environment variable.
    #[arg(long, value_name = "VAR")]
    pw_env: Option<String>,
    /// Prompt for the password on standard input.
    #[arg(long)]
    pw_prompt: bool,
}

#[derive(Args)]
struct RnArgs {
    #[command(flatten)]
    source: RnSource,
    /// File recording the last nonce used.
    #[arg(long, default_value = "keyless.rn")]
    rn_store: PathBuf,
}

#[derive(Args)]
#[group(multiple = false)]
struct RnSource {
    /// Use this nonce (32 hex characters).
    #[arg(long, value_name = "HEX")]
    rn: Option<String>,
    /// Draw a fresh nonce from the OS (default).
    #[arg(long)]
    rn_system: bool,
    /// Reuse the nonce recorded in --rn-store.
    #[arg(long)]
    rn_saved: bool,
}

impl RnArgs {
    fn mode(&self) -> NonceMode {
        match (&self.source.rn, self.source.rn_saved) {
            (Some(hex), _) => NonceMode::Provided(hex.clone()),
            (None, true) => NonceMode::Saved,
            (None, false) => NonceMode::System,
        }
    }

    fn next(&self) -> Result<keyless_core::SessionNonce> {
        NonceStore::open(&self.rn_store)?.new_nonce(&self.mode())
    }
}

impl SecretArgs {
    fn load(&self) -> Result<(Credentials, MemristorImage)> {
        let pw = if let Some(pw) = &self.pw.pw {
            pw.clone()
        } else if let Some(var) = &self.pw.pw_env {
            std::env::var(var).map_err(|_| Error::InvalidCredential("password variable not set"))?
        } else {
            eprint!("Enter the password: ");
            let mut line = String::new();
            io::stdin().lock().read_line(&mut line).map_err(Error::Io)?;
            line.trim_end_matches(['\r', '\n']).to_string()
        };
        let cred = Credentials::new(self.id.as_bytes(), pw.as_bytes())?;
        let img = MemristorImage::load(File::open(&self.lut).map_err(Error::ImageIo)?)?;
        Ok((cred, img))
    }
}

fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    }
    .map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(Error::Io)
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => fs::write(p, bytes),
        None => io::stdout().lock().write_all(bytes),
    }
    .map_err(Error::Io)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Lutgen { seed, out } => {
            let img = MemristorImage::generate(seed);
            let file = File::create(&out).map_err(Error::ImageIo)?;
            let bytes = img.save(io::BufWriter::new(file))?;
            let (lo, hi) = img.range();
            println!(
                "wrote {} cells (128 x 8, {bytes} bytes) to {}; range [{lo}, {hi}] ohms",
                keyless_core::image::CELLS,
                out.display()
            );
        }
        Command::Encrypt {
            secrets,
            rn,
            input,
            out,
        } => {
            let (cred, img) = secrets.load()?;
            let plaintext = read(&input)?;
            let rn = rn.next()?;
            let cipher = encrypt_message(&plaintext, &cred, &rn, &img)?;
            fs::write(&out, encode_frame(&rn, &cipher)).map_err(Error::Io)?;
            println!("rn = {rn}");
        }
        Command::Decrypt {
            secrets,
            input,
            out,
        } => {
            let (cred, img) = secrets.load()?;
            let (rn, cipher) = decode_frame(&read(&input)?)?;
            let plaintext = decrypt_message(&cipher, &cred, &rn, &img)?;
            emit(out.as_deref(), &plaintext)?;
        }
        Command::Send {
            secrets,
            rn,
            input,
            message,
            host,
            port,
        } => {
            let (cred, img) = secrets.load()?;
            let plaintext = match (input, message) {
                (Some(p), _) => read(&p)?,
                (None, Some(m)) => m.into_bytes(),
                (None, None) => unreachable!("clap requires one of --in/--message"),
            };
            let rn = rn.next()?;
            let mut stream = TcpStream::connect((host.as_str(), port)).map_err(Error::Transport)?;
            send_message_with_nonce(&mut stream, &plaintext, &cred, &img, rn)?;
            println!("sent {} bytes, rn = {rn}", plaintext.len());
        }
        Command::Recv {
            secrets,
            host,
            port,
            out,
        } => {
            let (cred, img) = secrets.load()?;
            let listener = TcpListener::bind((host.as_str(), port)).map_err(Error::Transport)?;
            let addr = listener.local_addr().map_err(Error::Transport)?;
            eprintln!("listening on {addr}");
            let (mut stream, _) = listener.accept().map_err(Error::Transport)?;
            let plaintext = receive_message(&mut stream, &cred, &img)?;
            emit(out.as_deref(), &plaintext)?;
        }
        Command::Kat { out } => {
            emit(out.as_deref(), kat::generate()?.as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
