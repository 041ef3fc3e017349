use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rdhei_core::{
    hc, metrics, read_pgm, sr, write_pgm, DataHidingKey, EncryptionKey, ErrorKind, GrayImage,
    SchemeParams, ShareImage,
};

#[derive(Parser)]
#[command(
    name = "rdhei",
    version,
    about = "Reversible data hiding over secret-shared images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Hc,
    Sr,
}

impl From<SchemeArg> for metrics::Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Hc => metrics::Scheme::Hc,
            SchemeArg::Sr => metrics::Scheme::Sr,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Split an image into n share images (share_<ID>.pgm)
    Encrypt {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long)]
        block: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// 32-byte encryption key file
        #[arg(long)]
        key: PathBuf,
        /// Seed for the coefficient and filler generator (reproducible output)
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: PathBuf,
        input: PathBuf,
    },
    /// Hide a payload in one share image
    Embed {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        /// 32-byte data-hiding key file
        #[arg(long)]
        dkey: PathBuf,
        #[arg(long)]
        payload: PathBuf,
        #[arg(long)]
        out: PathBuf,
        share: PathBuf,
    },
    /// Extract the payload of a marked share image
    Extract {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long)]
        dkey: PathBuf,
        /// Output file; standard output if omitted
        #[arg(long)]
        out: Option<PathBuf>,
        share: PathBuf,
    },
    /// Rebuild the original image from at least r share images
    Recover {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(required = true)]
        shares: Vec<PathBuf>,
    },
    /// Print key=value metrics for images and share files
    Metrics {
        /// Required when share files are given
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
        #[arg(long)]
        orig: Option<PathBuf>,
        #[arg(long)]
        recovered: Option<PathBuf>,
        shares: Vec<PathBuf>,
    },
}

fn load_image(path: &Path) -> anyhow::Result<GrayImage> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    read_pgm(&bytes).with_context(|| format!("parsing {}", path.display()))
}

fn write_atomic(path: &Path, data: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(data)?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Encrypt {
            scheme,
            block,
            r,
            n,
            key,
            seed,
            out_dir,
            input,
        } => {
            let params = SchemeParams::new(block, r, n)?;
            let key = EncryptionKey::load(&key)?;
            let img = load_image(&input)?;
            let mut rng = match seed {
                Some(s) => ChaCha20Rng::seed_from_u64(s),
                None => ChaCha20Rng::from_rng(&mut rand::rng()),
            };
            let shares: Vec<ShareImage> = match scheme {
                SchemeArg::Hc => hc::hc_encrypt(&img, &params, &key, &mut rng)?,
                SchemeArg::Sr => sr::sr_encrypt(&img, &params, &key, &mut rng)?,
            };
            fs::create_dir_all(&out_dir)
                .with_context(|| format!("creating {}", out_dir.display()))?;
            for share in &shares {
                let path = out_dir.join(format!("share_{}.pgm", share.id));
                write_atomic(&path, &write_pgm(&share.image))?;
            }
        }
        Command::Embed {
            scheme,
            dkey,
            payload,
            out,
            share,
        } => {
            let key = DataHidingKey::load(&dkey)?;
            let data =
                fs::read(&payload).with_context(|| format!("reading {}", payload.display()))?;
            let img = load_image(&share)?;
            let marked = match scheme {
                SchemeArg::Hc => hc::hc_embed(&img, &data, &key)?,
                SchemeArg::Sr => sr::sr_embed(&img, &data, &key)?,
            };
            write_atomic(&out, &write_pgm(&marked))?;
        }
        Command::Extract {
            scheme,
            dkey,
            out,
            share,
        } => {
            let key = DataHidingKey::load(&dkey)?;
            let img = load_image(&share)?;
            let data = match scheme {
                SchemeArg::Hc => hc::hc_extract(&img, &key)?,
                SchemeArg::Sr => sr::sr_extract(&img, &key)?,
            };
            match out {
                Some(path) => write_atomic(&path, &data)?,
                None => std::io::stdout().write_all(&data)?,
            }
        }
        Command::Recover {
            scheme,
            key,
            out,
            shares,
        } => {
            let key = EncryptionKey::load(&key)?;
            let imgs = shares
                .iter()
                .map(|p| load_image(p))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let img = match scheme {
                SchemeArg::Hc => hc::hc_recover(&imgs, &key)?,
                SchemeArg::Sr => sr::sr_recover(&imgs, &key)?,
            };
            write_atomic(&out, &write_pgm(&img))?;
        }
        Command::Metrics {
            scheme,
            orig,
            recovered,
            shares,
        } => {
            let scheme = match (scheme, shares.is_empty()) {
                (Some(s), _) => s.into(),
                (None, true) => metrics::Scheme::Hc,
                (None, false) => bail!(rdhei_core::Error::InvalidArgument(
                    "--scheme is required with share files".into()
                )),
            };
            let orig = orig.map(|p| load_image(&p)).transpose()?;
            let recovered = recovered.map(|p| load_image(&p)).transpose()?;
            let imgs = shares
                .iter()
                .map(|p| load_image(p))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let report = metrics::report(scheme, orig.as_ref(), recovered.as_ref(), &imgs)?;
            print!("{report}");
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<rdhei_core::Error>().map(|e| e.kind()) {
        Some(ErrorKind::Usage) => 2,
        Some(ErrorKind::Capacity) => 3,
        Some(ErrorKind::Recovery) => 4,
        Some(ErrorKind::Other) | None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
