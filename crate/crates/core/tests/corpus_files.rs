//! The shipped proof files are exactly the builder-generated corpus, and
//! each one checks. Set `RIRIG_BLESS=1` to regenerate them.

use std::path::PathBuf;

use ririg::logic::corpus;
use ririg::logic::{check_proof, Justification, Proof};

fn proofs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("proofs")
}

#[test]
fn shipped_proofs_match_the_builders() {
    let bless = std::env::var_os("RIRIG_BLESS").is_some();
    for (name, proof) in corpus::all() {
        let path = proofs_dir().join(name);
        let text = proof.to_text();
        if bless {
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let parsed = Proof::parse(&on_disk).unwrap();
        assert_eq!(parsed, proof, "{name}");
        assert_eq!(check_proof(&parsed.hypotheses, &parsed), Ok(()), "{name}");
    }
}

#[test]
fn broken_proof_is_rejected_at_the_right_line() {
    let text = std::fs::read_to_string(proofs_dir().join("weakening.prf")).unwrap();
    let mut p = Proof::parse(&text).unwrap();
    // Swap the premises of the final modus ponens.
    let last = p.lines.last_mut().unwrap();
    let Justification::Mp(i, j) = last.justification else {
        panic!("weakening.prf should end with modus ponens");
    };
    last.justification = Justification::Mp(j, i);
    let reparsed = Proof::parse(&p.to_text()).unwrap();
    let err = check_proof(&reparsed.hypotheses, &reparsed).unwrap_err();
    assert_eq!(err.line, reparsed.lines.len());
}
