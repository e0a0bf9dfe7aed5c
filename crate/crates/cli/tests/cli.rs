use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use paving_exchange::{catalog, Matroid};
use tempfile::TempDir;

fn pavex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pavex"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_uniform() {
    let out = pavex(&["gen", "--uniform", "2", "4"]);
    assert!(out.status.success());
    let m = Matroid::parse(&stdout(&out)).unwrap();
    assert_eq!(m, catalog::uniform(2, 4));
    assert_eq!(
        stdout(&pavex(&["gen", "--uniform", "4", "2"])),
        stdout(&out)
    );
}

#[test]
fn gen_round_trip_and_determinism() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("p.txt");
    let p = path.to_str().unwrap();
    let out = pavex(&["gen", "--paving", "8", "3", "3", "--seed", "5", "--out", p]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let m = Matroid::parse(&text).unwrap();
    assert_eq!(m.to_text(), text);
    let again = pavex(&["gen", "--paving", "8", "3", "3", "--seed", "5"]);
    assert_eq!(stdout(&again), text);
    assert!(pavex(&["validate", p]).status.success());
}

#[test]
fn verify_m1() {
    let dir = TempDir::new().unwrap();
    let m1 = write(dir.path(), "m1.txt", &catalog::m1().to_text());
    let out = pavex(&["verify", &m1, "--degree", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).trim_end().ends_with("all connected"));
    assert!(stdout(&out).lines().any(|l| l.starts_with("fiber union=")));
}

#[test]
fn solve_then_recheck_in_fresh_process() {
    let dir = TempDir::new().unwrap();
    let fano = write(dir.path(), "fano.txt", &catalog::fano().to_text());
    let from = write(dir.path(), "from.txt", "tuple degree=2\n0,1,3\n2,4,6\n");
    let to = write(dir.path(), "to.txt", "tuple degree=2\n2,4,6\n0,1,3\n");
    let cert = dir.path().join("cert.txt");
    let c = cert.to_str().unwrap();
    let out = pavex(&[
        "solve",
        &fano,
        "--from",
        &from,
        "--to",
        &to,
        "--certificate",
        c,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(fs::read_to_string(&cert).unwrap(), stdout(&out));

    let check = pavex(&["validate", &fano, "--certificate", c, "--to", &to]);
    assert!(check.status.success());
    assert!(stdout(&check).starts_with("certificate ok"));

    let wrong = pavex(&["validate", &fano, "--certificate", c, "--to", &from]);
    assert_eq!(wrong.status.code(), Some(1));

    let again = pavex(&["solve", &fano, "--from", &from, "--to", &to]);
    assert_eq!(stdout(&again), stdout(&out));
}

#[test]
fn oracle_distance_and_geodesic() {
    let dir = TempDir::new().unwrap();
    let u = write(dir.path(), "u.txt", &catalog::uniform(2, 4).to_text());
    let from = write(dir.path(), "a.txt", "tuple degree=2\n0,1\n2,3\n");
    let to = write(dir.path(), "b.txt", "tuple degree=2\n2,3\n0,1\n");
    assert_eq!(
        stdout(&pavex(&["oracle", &u, "--from", &from, "--to", &to])),
        "distance=2\n"
    );
    let geo = stdout(&pavex(&[
        "oracle",
        &u,
        "--from",
        &from,
        "--to",
        &to,
        "--shortest",
    ]));
    assert!(geo.starts_with("sequence degree=2"));
}

#[test]
fn info_relax_trace_binomials() {
    let dir = TempDir::new().unwrap();
    let m2 = write(dir.path(), "m2.txt", &catalog::m2().to_text());
    let info = stdout(&pavex(&["info", &m2]));
    assert!(info.starts_with("n=6 r=3 bases=16 paving=true"));
    assert!(info.contains("stressed 0,1,2,3"));

    let relaxed = pavex(&["relax", &m2, "--hyperplane", "0,1,2,3"]);
    assert_eq!(
        Matroid::parse(&stdout(&relaxed)).unwrap(),
        catalog::uniform(3, 6)
    );
    assert_eq!(
        pavex(&["relax", &m2, "--hyperplane", "0,1"]).status.code(),
        Some(1)
    );

    let fano = write(dir.path(), "fano.txt", &catalog::fano().to_text());
    assert_eq!(stdout(&pavex(&["trace", &fano])).lines().count(), 7);

    let u23 = write(dir.path(), "u23.txt", &catalog::uniform(2, 3).to_text());
    let b = stdout(&pavex(&["binomials", &u23]));
    assert_eq!(b.lines().count(), 3);
    assert!(b.lines().all(|l| l.starts_with("binomial ")));
}

#[test]
fn errors_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.txt", "matroid n=4 r=2\n0,1\n0,1,2\n");
    let out = pavex(&["validate", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let broken = write(dir.path(), "broken.txt", "matroid n=4 r=2\n0,1\n2,3\n");
    assert_eq!(pavex(&["validate", &broken]).status.code(), Some(1));

    assert_eq!(pavex(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(pavex(&["info", &bad, "--bogus"]).status.code(), Some(1));
    assert_eq!(pavex(&["info", "/nonexistent/file"]).status.code(), Some(1));

    let m1 = write(dir.path(), "m1.txt", &catalog::m1().to_text());
    let from = write(dir.path(), "from.txt", "tuple degree=2\n0,2\n1,3\n");
    let other = write(dir.path(), "other.txt", "tuple degree=2\n0,2\n1,2\n");
    assert_eq!(
        pavex(&["solve", &m1, "--from", &from, "--to", &other])
            .status
            .code(),
        Some(1)
    );
}
