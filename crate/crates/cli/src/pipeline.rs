use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::Subcommand;
use desksnark::snark::{self, Proof, ProvingKey, PublicInputs, SnarkError, SnarkParams, VerifyingKey};
use desksnark::worked::WorkedExample;
use desksnark::{compile_source, compile_to_r1cs, generate_witness, r1cs_to_qap, Domain, FlatProgram, Qap};
use desksnark::{combine_with_witness, compute_h, target_poly, WitnessVector};
use serde_json::json;

use crate::files::{read_json, read_text, write_json};
use crate::{Out, Outcome};

#[derive(Subcommand)]
pub enum PipelineCmd {
    /// Compile a source file into a gate-level circuit.
    Compile {
        src: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Work over exact rationals instead of a prime field.
        #[arg(long, conflicts_with = "modulus")]
        rational: bool,
        /// Prime modulus (decimal); defaults to the BN254 scalar field.
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Run the circuit on an input and record every wire value.
    Witness {
        circuit: PathBuf,
        /// `x=<value>`
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Interpolate the circuit's constraints into a QAP.
    Qap {
        circuit: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Also check that this witness makes V*W - K divisible by Z.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Sample proving and verifying keys from a seed.
    Setup {
        circuit: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 128)]
        lambda: u32,
        /// Proving key path, then verifying key path.
        #[arg(short, long, required = true, num_args = 2, value_names = ["PK", "VK"])]
        output: Vec<PathBuf>,
    },
    /// Prove that a witness satisfies the circuit.
    Prove {
        pk: PathBuf,
        circuit: PathBuf,
        witness: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a proof against public values such as `out=35`.
    Verify {
        vk: PathBuf,
        proof: PathBuf,
        #[arg(long = "public", allow_hyphen_values = true)]
        public: Vec<String>,
    },
}

pub fn run(cmd: PipelineCmd, out: &Out) -> Result<Outcome> {
    match cmd {
        PipelineCmd::Compile {
            src,
            output,
            rational,
            modulus,
        } => {
            let domain = match (rational, modulus) {
                (true, _) => Domain::Rational,
                (false, Some(m)) => parse_modulus(&m)?,
                (false, None) => Domain::bn254(),
            };
            let text = read_text(&src)?;
            let fp = compile_source(&text, &domain).with_context(|| format!("cannot compile {}", src.display()))?;
            write_json(&output, &fp.to_json())?;
            out.emit(
                format!(
                    "{} gates, wires [{}] -> {}",
                    fp.gates.len(),
                    fp.wires.join(", "),
                    output.display()
                ),
                json!({
                    "field": domain.tag(),
                    "gates": fp.gates.len(),
                    "wires": fp.wires,
                    "output": output,
                }),
            );
            Ok(Outcome::Accept)
        }
        PipelineCmd::Witness { circuit, input, output } => {
            let fp = load_circuit(&circuit)?;
            let (name, value) = input
                .split_once('=')
                .ok_or_else(|| anyhow!("--input expects name=value, got {input:?}"))?;
            let input_wire = &fp.wires[1];
            if name.trim() != input_wire {
                bail!("the circuit's input is `{input_wire}`, not `{}`", name.trim());
            }
            let x = fp.domain.parse(value.trim())?;
            let w = generate_witness(&fp, &x)?;
            write_json(&output, &w.to_json())?;
            let out_value = w.t[2].to_repr_string();
            out.emit(
                format!("out = {out_value} -> {}", output.display()),
                json!({ "out": out_value, "output": output }),
            );
            Ok(Outcome::Accept)
        }
        PipelineCmd::Qap {
            circuit,
            output,
            witness,
        } => {
            let fp = load_circuit(&circuit)?;
            let qap = build_qap(&fp)?;
            write_json(&output, &qap.to_json())?;
            let mut summary = json!({
                "gates": qap.num_gates(),
                "wires": qap.num_wires(),
                "output": output,
            });
            let mut text = format!(
                "{} gates, {} wire polynomials per family -> {}",
                qap.num_gates(),
                qap.num_wires(),
                output.display()
            );
            let mut outcome = Outcome::Accept;
            if let Some(wp) = witness {
                let w = load_witness(&wp)?;
                let (v, ww, k) = combine_with_witness(&qap, &w)?;
                let t = target_poly(&v, &ww, &k)?;
                let divisible = compute_h(&t, qap.z()).is_ok();
                summary["divisible"] = json!(divisible);
                text.push_str(if divisible {
                    "\nV*W - K is divisible by Z"
                } else {
                    "\nV*W - K is NOT divisible by Z"
                });
                if !divisible {
                    outcome = Outcome::Reject;
                }
            }
            out.emit(text, summary);
            Ok(outcome)
        }
        PipelineCmd::Setup {
            circuit,
            seed,
            lambda,
            output,
        } => {
            let fp = load_circuit(&circuit)?;
            require_field(&fp.domain, "setup")?;
            let qap = build_qap(&fp)?;
            let (pk, vk) = snark::setup(&qap, &SnarkParams { lambda, seed })?;
            let [pk_path, vk_path] = [&output[0], &output[1]];
            write_json(pk_path, &pk.to_json())?;
            write_json(vk_path, &vk.to_json())?;
            out.emit(
                format!(
                    "keys for {} gates (seed {seed}) -> {}, {}",
                    qap.num_gates(),
                    pk_path.display(),
                    vk_path.display()
                ),
                json!({
                    "seed": seed,
                    "gates": qap.num_gates(),
                    "digest": qap.digest(),
                    "pk": pk_path,
                    "vk": vk_path,
                }),
            );
            Ok(Outcome::Accept)
        }
        PipelineCmd::Prove {
            pk,
            circuit,
            witness,
            output,
        } => {
            let fp = load_circuit(&circuit)?;
            require_field(&fp.domain, "prove")?;
            let pk = ProvingKey::from_json(&read_json(&pk)?)
                .with_context(|| format!("bad proving key {}", pk.display()))?;
            let w = load_witness(&witness)?;
            let qap = build_qap(&fp)?;
            match snark::prove(&pk, &qap, &w) {
                Ok(proof) => {
                    write_json(&output, &proof.to_json())?;
                    out.emit(
                        format!("proof -> {}", output.display()),
                        json!({ "proved": true, "output": output }),
                    );
                    Ok(Outcome::Accept)
                }
                Err(SnarkError::UnsatisfiedWitness) => {
                    eprintln!("the witness does not satisfy the circuit (V*W - K is not divisible by Z)");
                    out.emit("no proof", json!({ "proved": false }));
                    Ok(Outcome::Reject)
                }
                Err(e) => Err(e.into()),
            }
        }
        PipelineCmd::Verify { vk, proof, public } => {
            let vk = VerifyingKey::from_json(&read_json(&vk)?)
                .with_context(|| format!("bad verifying key {}", vk.display()))?;
            require_field(&vk.domain, "verify")?;
            let proof = Proof::from_json(&read_json(&proof)?)
                .with_context(|| format!("bad proof {}", proof.display()))?;
            let mut inputs = PublicInputs::new();
            inputs.insert("one".into(), vk.domain.one());
            for p in &public {
                let (name, value) = p
                    .split_once('=')
                    .ok_or_else(|| anyhow!("--public expects name=value, got {p:?}"))?;
                inputs.insert(name.trim().to_string(), vk.domain.parse(value.trim())?);
            }
            let accepted = match snark::verify(&vk, &inputs, &proof) {
                Ok(ok) => ok,
                Err(SnarkError::DigestMismatch) => {
                    eprintln!("the proof was made for a different circuit");
                    false
                }
                Err(e) => return Err(e.into()),
            };
            out.emit(
                if accepted { "accept" } else { "reject" },
                json!({ "accepted": accepted }),
            );
            Ok(if accepted { Outcome::Accept } else { Outcome::Reject })
        }
    }
}

pub fn show_example(out: &Out) -> Result<Outcome> {
    let ex = WorkedExample::build()?;
    out.emit(ex.render(), ex.to_json());
    Ok(Outcome::Accept)
}

fn load_circuit(path: &PathBuf) -> Result<FlatProgram> {
    FlatProgram::from_json(&read_json(path)?).with_context(|| format!("bad circuit file {}", path.display()))
}

fn load_witness(path: &PathBuf) -> Result<WitnessVector> {
    WitnessVector::from_json(&read_json(path)?).with_context(|| format!("bad witness file {}", path.display()))
}

fn build_qap(fp: &FlatProgram) -> Result<Qap> {
    Ok(r1cs_to_qap(&compile_to_r1cs(fp))?)
}

fn parse_modulus(s: &str) -> Result<Domain> {
    let m = s
        .trim()
        .parse()
        .with_context(|| format!("modulus {s:?} is not a decimal integer"))?;
    Ok(Domain::prime_field(m)?)
}

fn require_field(d: &Domain, what: &str) -> Result<()> {
    if !d.is_field() {
        bail!("{what} needs a prime field; recompile without --rational");
    }
    Ok(())
}
