use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::Subcommand;
use desksnark::rng::seeded;
use desksnark::snark::{ProvingKey, SnarkError, SnarkParams, VerifyingKey};
use desksnark::Scalar;
use desksnark_ledger::json::{
    address_from_json, address_to_json, coin_from_json, coin_to_json, ledger_from_json, ledger_to_json,
    public_address_from_json, public_address_to_json, tx_from_json, tx_to_json,
};
use desksnark_ledger::mimc::DEFAULT_ROUNDS;
use desksnark_ledger::params::{DEFAULT_DEPTH, DEFAULT_V_MAX};
use desksnark_ledger::{
    create_address, mint, pour, receive, verify_tx, Address, Coin, DapError, DapParams, LedgerState, PourSystem,
    PublicAddress, Tx,
};
use serde_json::{json, Value};

use crate::files::{read_json, sibling, write_json, FileLock};
use crate::{Out, Outcome};

#[derive(Subcommand)]
pub enum LedgerCmd {
    /// Create an empty ledger and the pour circuit's keys.
    Init {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_ROUNDS)]
        rounds: u32,
        /// Replace an existing ledger.
        #[arg(long)]
        force: bool,
    },
    /// Derive an address from a seed; also writes `<name>.pub.json`.
    Keygen {
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Mint a coin to an address and record it on the ledger.
    Mint {
        #[arg(long)]
        addr: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        /// Coin file; defaults to `coin-<leaf>.json` next to the ledger.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Spend two coins into two new ones; writes a transaction file.
    Pour {
        #[arg(long, num_args = 2, required = true, value_names = ["COIN1", "COIN2"])]
        old: Vec<PathBuf>,
        /// Owner of the old coins: one file for both, or one per coin.
        #[arg(long, num_args = 1..=2, required = true)]
        addr: Vec<PathBuf>,
        /// `<address file>:<value>`, twice.
        #[arg(long, num_args = 2, required = true, value_names = ["ADDR:V1", "ADDR:V2"])]
        to: Vec<String>,
        /// Transaction file; defaults to `tx-<n>.json` next to the ledger.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check a transaction and append it to the ledger if valid.
    VerifyTx { tx: PathBuf },
    /// List unspent coins paid to an address by pours.
    Receive {
        #[arg(long)]
        addr: PathBuf,
        /// Write each coin found to `<dir>/received-<leaf>.json`.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Summarize the ledger.
    Show,
    /// Run the whole mint/pour/receive lifecycle in memory.
    Demo {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn run(cmd: LedgerCmd, ledger_path: &Path, out: &Out) -> Result<Outcome> {
    match cmd {
        LedgerCmd::Init {
            seed,
            depth,
            rounds,
            force,
        } => {
            let _lock = FileLock::acquire(ledger_path)?;
            if ledger_path.exists() && !force {
                bail!("{} already exists (use --force to replace it)", ledger_path.display());
            }
            let params = DapParams::new(&desksnark::Domain::bn254(), depth, rounds, DEFAULT_V_MAX)?;
            let system = PourSystem::new(&params)?;
            let (pk, vk) = system.setup(&SnarkParams { lambda: 128, seed })?;
            let ledger = LedgerState::new(params);
            let (pk_path, vk_path) = key_paths(ledger_path);
            write_json(&pk_path, &pk.to_json())?;
            write_json(&vk_path, &vk.to_json())?;
            write_json(ledger_path, &ledger_to_json(&ledger))?;
            out.emit(
                format!(
                    "ledger {} (depth {depth}, {rounds} rounds); pour circuit {} constraints; keys {}, {}",
                    ledger_path.display(),
                    system.cs.num_rows(),
                    pk_path.display(),
                    vk_path.display()
                ),
                json!({
                    "ledger": ledger_path,
                    "root": ledger.root().to_repr_string(),
                    "constraints": system.cs.num_rows(),
                    "pk": pk_path,
                    "vk": vk_path,
                }),
            );
            Ok(Outcome::Accept)
        }
        LedgerCmd::Keygen { seed, output } => {
            let params = if ledger_path.exists() {
                load_ledger(ledger_path)?.params
            } else {
                DapParams::standard()
            };
            let addr = create_address(&params, &params.domain().from_u64(seed));
            let pub_path = sibling(&output, "pub.json");
            write_json(&output, &address_to_json(&addr))?;
            write_json(&pub_path, &public_address_to_json(&addr.public()))?;
            out.emit(
                format!(
                    "address a_pk={} -> {} (public part {})",
                    addr.a_pk,
                    output.display(),
                    pub_path.display()
                ),
                json!({ "a_pk": addr.a_pk.to_repr_string(), "address": output, "public": pub_path }),
            );
            Ok(Outcome::Accept)
        }
        LedgerCmd::Mint {
            addr,
            value,
            output,
            seed,
        } => {
            let v: u64 = value
                .trim()
                .parse()
                .map_err(|_| anyhow!("--value must be a non-negative integer, got {value:?}"))?;
            let _lock = FileLock::acquire(ledger_path)?;
            let mut ledger = load_ledger(ledger_path)?;
            let vk = load_vk(ledger_path)?;
            let addr = load_address(&ledger.params, &addr)?;
            let leaf = ledger.tree().leaves().len();
            let mut rng = seeded(seed, &format!("mint/{leaf}"));
            let (coin, tx) = mint(&ledger, &addr, &ledger.params.domain().from_u64(v), &mut rng)?;
            if !verify_tx(&mut ledger, &Tx::Mint(tx), &vk) {
                bail!("the ledger refused the mint");
            }
            let coin_path = output.unwrap_or_else(|| ledger_path.with_file_name(format!("coin-{leaf}.json")));
            write_json(&coin_path, &coin_to_json(&coin))?;
            write_json(ledger_path, &ledger_to_json(&ledger))?;
            out.emit(
                format!("minted {v} at leaf {leaf} -> {}", coin_path.display()),
                json!({
                    "value": v,
                    "leaf": leaf,
                    "cm": coin.cm.to_repr_string(),
                    "coin": coin_path,
                    "root": ledger.root().to_repr_string(),
                }),
            );
            Ok(Outcome::Accept)
        }
        LedgerCmd::Pour {
            old,
            addr,
            to,
            output,
            seed,
        } => {
            let ledger = load_ledger(ledger_path)?;
            let params = ledger.params.clone();
            let owners = addr
                .iter()
                .map(|p| load_address(&params, p))
                .collect::<Result<Vec<_>>>()?;
            let owner = |i: usize| &owners[i.min(owners.len() - 1)];
            let coins = old
                .iter()
                .map(|p| {
                    coin_from_json(&params, &read_json(p)?).with_context(|| format!("bad coin file {}", p.display()))
                })
                .collect::<Result<Vec<_>>>()?;
            let outputs = to
                .iter()
                .map(|spec| parse_output(&params, spec))
                .collect::<Result<Vec<_>>>()?;
            let system = PourSystem::new(&params)?;
            let pk = load_pk(ledger_path)?;
            let n = ledger.txs().len();
            let mut rng = seeded(seed, &format!("pour/{n}"));
            let res = pour(
                &ledger,
                [(&coins[0], owner(0)), (&coins[1], owner(1))],
                [(&outputs[0].0, &outputs[0].1), (&outputs[1].0, &outputs[1].1)],
                &system,
                &pk,
                &mut rng,
            );
            let (tx, _) = match res {
                Ok(r) => r,
                Err(e @ (DapError::Snark(SnarkError::UnsatisfiedWitness) | DapError::CoinAlreadySpent)) => {
                    let why = match e {
                        DapError::CoinAlreadySpent => "an input coin is already spent".to_string(),
                        _ => "input and output values differ".to_string(),
                    };
                    eprintln!("cannot pour: {why}");
                    out.emit("no transaction", json!({ "poured": false, "reason": why }));
                    return Ok(Outcome::Reject);
                }
                Err(e) => return Err(e.into()),
            };
            let tx_path = output.unwrap_or_else(|| ledger_path.with_file_name(format!("tx-{n}.json")));
            let tx = Tx::Pour(tx);
            write_json(&tx_path, &tx_to_json(&tx))?;
            let Tx::Pour(p) = &tx else { unreachable!() };
            out.emit(
                format!("pour transaction -> {} (submit with verify-tx)", tx_path.display()),
                json!({
                    "poured": true,
                    "tx": tx_path,
                    "sn_old": p.sn_old.iter().map(Scalar::to_repr_string).collect::<Vec<_>>(),
                    "cm_new": p.cm_new.iter().map(Scalar::to_repr_string).collect::<Vec<_>>(),
                }),
            );
            Ok(Outcome::Accept)
        }
        LedgerCmd::VerifyTx { tx } => {
            let _lock = FileLock::acquire(ledger_path)?;
            let mut ledger = load_ledger(ledger_path)?;
            let vk = load_vk(ledger_path)?;
            let tx = tx_from_json(ledger.params.domain(), &read_json(&tx)?)
                .with_context(|| format!("bad transaction file {}", tx.display()))?;
            let kind = match tx {
                Tx::Mint(_) => "mint",
                Tx::Pour(_) => "pour",
            };
            let accepted = verify_tx(&mut ledger, &tx, &vk);
            if accepted {
                write_json(ledger_path, &ledger_to_json(&ledger))?;
            } else {
                eprintln!("{kind} transaction rejected");
            }
            out.emit(
                if accepted {
                    format!("{kind} accepted; root {}", ledger.root())
                } else {
                    format!("{kind} rejected")
                },
                json!({ "type": kind, "accepted": accepted, "root": ledger.root().to_repr_string() }),
            );
            Ok(if accepted { Outcome::Accept } else { Outcome::Reject })
        }
        LedgerCmd::Receive { addr, output } => {
            let ledger = load_ledger(ledger_path)?;
            let addr = load_address(&ledger.params, &addr)?;
            let coins = receive(&ledger, &addr);
            let mut listed = Vec::new();
            let mut text = format!("{} unspent coin(s)", coins.len());
            for c in &coins {
                let leaf = ledger.tree().position(&c.cm).expect("received coins are in the tree");
                let mut entry = json!({ "leaf": leaf, "value": c.v.to_repr_string(), "cm": c.cm.to_repr_string() });
                text.push_str(&format!("\n  leaf {leaf}: value {}", c.v));
                if let Some(dir) = &output {
                    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
                    let path = dir.join(format!("received-{leaf}.json"));
                    write_json(&path, &coin_to_json(c))?;
                    text.push_str(&format!(" -> {}", path.display()));
                    entry["coin"] = json!(path);
                }
                listed.push(entry);
            }
            out.emit(text, json!({ "coins": listed }));
            Ok(Outcome::Accept)
        }
        LedgerCmd::Show => {
            let ledger = load_ledger(ledger_path)?;
            let mints = ledger.txs().iter().filter(|t| matches!(t, Tx::Mint(_))).count();
            let p = &ledger.params;
            out.emit(
                format!(
                    "depth {}, {} rounds\nleaves {}/{}\nroot {}\nroots in history {}\nspent serials {}\ntransactions {} ({} mint, {} pour)",
                    p.depth,
                    p.mimc.rounds(),
                    ledger.tree().leaves().len(),
                    ledger.tree().capacity(),
                    ledger.root(),
                    ledger.roots().len(),
                    ledger.serials().len(),
                    ledger.txs().len(),
                    mints,
                    ledger.txs().len() - mints
                ),
                json!({
                    "depth": p.depth,
                    "rounds": p.mimc.rounds(),
                    "leaves": ledger.tree().leaves().len(),
                    "root": ledger.root().to_repr_string(),
                    "roots": ledger.roots().len(),
                    "serials": ledger.serials().len(),
                    "mints": mints,
                    "pours": ledger.txs().len() - mints,
                }),
            );
            Ok(Outcome::Accept)
        }
        LedgerCmd::Demo { seed } => demo(seed, out),
    }
}

fn key_paths(ledger_path: &Path) -> (PathBuf, PathBuf) {
    (sibling(ledger_path, "pk.json"), sibling(ledger_path, "vk.json"))
}

fn load_ledger(path: &Path) -> Result<LedgerState> {
    if !path.exists() {
        bail!("no ledger at {}; run `desksnark init` first", path.display());
    }
    ledger_from_json(&read_json(path)?).with_context(|| format!("bad ledger file {}", path.display()))
}

fn load_vk(ledger_path: &Path) -> Result<VerifyingKey> {
    let path = key_paths(ledger_path).1;
    VerifyingKey::from_json(&read_json(&path)?).with_context(|| format!("bad verifying key {}", path.display()))
}

fn load_pk(ledger_path: &Path) -> Result<ProvingKey> {
    let path = key_paths(ledger_path).0;
    ProvingKey::from_json(&read_json(&path)?).with_context(|| format!("bad proving key {}", path.display()))
}

fn load_address(params: &DapParams, path: &Path) -> Result<Address> {
    address_from_json(params, &read_json(path)?).with_context(|| format!("bad address file {}", path.display()))
}

/// `<address file>:<value>`; the file may hold a public or a secret address.
fn parse_output(params: &DapParams, spec: &str) -> Result<(PublicAddress, Scalar)> {
    let (path, value) = spec
        .rsplit_once(':')
        .ok_or_else(|| anyhow!("--to expects <address file>:<value>, got {spec:?}"))?;
    let v: u64 = value
        .trim()
        .parse()
        .map_err(|_| anyhow!("value in {spec:?} must be a non-negative integer"))?;
    let v = params.domain().from_u64(v);
    params.check_value(&v)?;
    let path = Path::new(path);
    let a = public_address_from_json(params.domain(), &read_json(path)?)
        .with_context(|| format!("bad address file {}", path.display()))?;
    Ok((a, v))
}

struct Demo<'a> {
    out: &'a Out,
    phases: Vec<Value>,
    failed: bool,
}

impl Demo<'_> {
    fn phase(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        let detail = detail.into();
        self.out
            .note(format!("[{name}] {}{detail}", if ok { "" } else { "FAILED: " }));
        self.phases.push(json!({ "phase": name, "ok": ok, "detail": detail }));
        self.failed |= !ok;
    }
}

fn demo(seed: u64, out: &Out) -> Result<Outcome> {
    let started = Instant::now();
    let mut d = Demo {
        out,
        phases: Vec::new(),
        failed: false,
    };
    let params = DapParams::standard();
    let dom = params.domain().clone();
    let value = |v: u64| dom.from_u64(v);

    let system = PourSystem::new(&params)?;
    let (pk, vk) = system.setup(&SnarkParams { lambda: 128, seed })?;
    d.phase(
        "setup",
        true,
        format!(
            "depth {}, {} MiMC rounds, pour circuit {} constraints, keys from seed {seed}",
            params.depth,
            params.mimc.rounds(),
            system.cs.num_rows()
        ),
    );

    let mut rng = seeded(seed, "demo");
    let alice = create_address(&params, &dom.random(&mut rng)?);
    let bob = create_address(&params, &dom.random(&mut rng)?);
    d.phase("keygen", alice.a_pk != bob.a_pk, "addresses for alice and bob");

    let mut ledger = LedgerState::new(params.clone());
    let mut minted = |ledger: &mut LedgerState, addr: &Address, v: u64| -> Result<(Coin, bool)> {
        let (coin, tx) = mint(ledger, addr, &value(v), &mut rng)?;
        let ok = verify_tx(ledger, &Tx::Mint(tx), &vk);
        Ok((coin, ok))
    };
    let (c2, ok2) = minted(&mut ledger, &alice, 2)?;
    let (c3, ok3) = minted(&mut ledger, &alice, 3)?;
    d.phase("mint", ok2 && ok3, "alice mints coins worth 2 and 3");

    let mut rng = seeded(seed, "demo/pour");
    let (tx, [to_bob, to_alice]) = pour(
        &ledger,
        [(&c2, &alice), (&c3, &alice)],
        [(&bob.public(), &value(4)), (&alice.public(), &value(1))],
        &system,
        &pk,
        &mut rng,
    )?;
    d.phase("pour", true, "2 + 3 -> 4 for bob, 1 for alice");

    let mut fabricated = tx.clone();
    fabricated.rt = &fabricated.rt + &dom.one();
    let fake_ok = verify_tx(&mut ledger.clone(), &Tx::Pour(fabricated), &vk);
    let tx = Tx::Pour(tx);
    let ok = verify_tx(&mut ledger, &tx, &vk);
    d.phase(
        "verify",
        ok && !fake_ok,
        format!(
            "pour accepted: {ok}; same pour against a fabricated root accepted: {fake_ok}"
        ),
    );

    let bobs = receive(&ledger, &bob);
    let alices = receive(&ledger, &alice);
    d.phase(
        "receive",
        bobs == [to_bob.clone()] && alices == [to_alice.clone()],
        format!("bob finds {} coin(s), alice finds {}", bobs.len(), alices.len()),
    );

    let replay = verify_tx(&mut ledger, &tx, &vk);
    d.phase("double-spend", !replay, if replay { "replay accepted" } else { "double-spend rejected" });

    let mut rng = seeded(seed, "demo/respend");
    let (zero, tx0) = mint(&ledger, &bob, &value(0), &mut rng)?;
    let ok0 = verify_tx(&mut ledger, &Tx::Mint(tx0), &vk);
    let (tx2, _) = pour(
        &ledger,
        [(&to_bob, &bob), (&zero, &bob)],
        [(&alice.public(), &value(3)), (&bob.public(), &value(1))],
        &system,
        &pk,
        &mut rng,
    )?;
    let ok2 = verify_tx(&mut ledger, &Tx::Pour(tx2), &vk);
    let bobs = receive(&ledger, &bob);
    let spent_gone = !bobs.contains(&to_bob) && bobs.len() == 1 && bobs[0].v == value(1);
    d.phase(
        "spend-received",
        ok0 && ok2 && spent_gone,
        "bob pays 3 of his 4 to alice; receive no longer lists the spent coin",
    );

    let ok = !d.failed;
    out.emit(
        format!(
            "demo {} in {:.1} s",
            if ok { "passed" } else { "FAILED" },
            started.elapsed().as_secs_f64()
        ),
        json!({
            "ok": ok,
            "seed": seed,
            "double_spend_rejected": !replay,
            "phases": d.phases,
            "root": ledger.root().to_repr_string(),
        }),
    );
    Ok(if ok { Outcome::Accept } else { Outcome::Reject })
}
