use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kronecker_duality::doc::Document;
use kronecker_duality::quiver::Rep;
use kronecker_duality::sheafbridge::{ideal_sheaf, lambda3};

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("kdual-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn write(&self, name: &str, doc: &Document) -> PathBuf {
        let p = self.0.join(name);
        std::fs::write(&p, doc.to_json()).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn kdual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdual")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn pairing_of_incident_point_and_line() {
    let dir = Scratch::new("pair");
    let v = dir.write("ip.json", &Document::Bundle(ideal_sheaf(&[1, 2, 3]).unwrap()));
    let on = dir.write("on.json", &Document::Rep(Rep::scalars(&[1, 1, -1])));
    let off = dir.write("off.json", &Document::Rep(Rep::scalars(&[1, 0, 0])));

    let o = kdual(&["pair", s(&v), s(&on)]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "0");
    assert_eq!(lines[1], "big=0 compact=0");
    assert_eq!(lines[2], "h0=1 h1=1");

    let text = stdout(&kdual(&["pair", s(&v), s(&off)]));
    assert_ne!(text.lines().next().unwrap(), "0");
    assert!(text.contains("h0=0 h1=0"));
}

#[test]
fn reflect_roundtrip_through_files() {
    let dir = Scratch::new("reflect");
    let v = dir.write("v.json", &Document::Rep(Rep::scalars(&[2, -1, 5])));
    let up = dir.path("up.json");
    assert!(kdual(&["reflect", s(&v), "--out", s(&up)]).status.success());
    let down = kdual(&["unreflect", s(&up)]);
    assert!(down.status.success());
    let rep = Document::parse(&stdout(&down)).unwrap().into_rep().unwrap();
    assert_eq!(rep.dim(), Rep::scalars(&[2, -1, 5]).dim());
    let ratio = &rep.mats()[1][(0, 0)] / &rep.mats()[0][(0, 0)];
    assert_eq!(ratio, kronecker_duality::exactla::ratio(-1, 2));
}

#[test]
fn curve_strata_and_cohomology() {
    let dir = Scratch::new("sheaf");
    let lam = dir.write("lam.json", &Document::Pencil(lambda3()));
    assert_eq!(stdout(&kdual(&["curve", s(&lam)])), "0\n");
    let line = dir.write("line.json", &Document::Rep(Rep::scalars(&[2, -3, 5])));
    assert_eq!(stdout(&kdual(&["curve", s(&line)])), "2*x - 3*y + 5*z\n");

    let ip = dir.write("ip.json", &Document::Bundle(ideal_sheaf(&[0, 0, 1]).unwrap()));
    assert_eq!(stdout(&kdual(&["strata", s(&ip)])), "1\nhom_to_O=1\n");
    assert_eq!(stdout(&kdual(&["coh", s(&ip), "--twist", "2"])), "5 0 0\n");
    assert_eq!(stdout(&kdual(&["coh", s(&ip), "--twist", "-3"])), "0 1 1\n");
    assert_eq!(kdual(&["coh", s(&ip), "--twist", "99"]).status.code(), Some(1));
}

#[test]
fn drezet_commands() {
    assert_eq!(stdout(&kdual(&["eps", "1/4"])), "slope 2/5\nrank 5\ndiscriminant 12/25\n");
    assert_eq!(stdout(&kdual(&["height", "3", "0", "5"])), "2\n");
    assert_eq!(stdout(&kdual(&["delta", "0"])).lines().next(), Some("1"));
    assert_eq!(stdout(&kdual(&["posdim", "1", "0", "0"])), "false\n");
    assert_eq!(stdout(&kdual(&["posdim", "1", "0", "1"])), "true\n");
}

#[test]
fn stability_needs_a_seed_and_reports_a_verdict() {
    let dir = Scratch::new("stable");
    let v = dir.write("v.json", &Document::Rep(Rep::scalars(&[1, 2, 3])));
    assert_eq!(kdual(&["stable", s(&v)]).status.code(), Some(2));
    let o = kdual(&["stable", s(&v), "--seed", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("stable\n"));
    let z = dir.write("z.json", &Document::Rep(Rep::scalars(&[0, 0, 0])));
    assert!(stdout(&kdual(&["stable", s(&z), "--seed", "1"])).starts_with("unstable\n"));
}

#[test]
fn exit_codes() {
    let dir = Scratch::new("codes");
    let bad = dir.path("bad.json");
    std::fs::write(&bad, "{\"kind\": \"rep\", \"version\": 1}").unwrap();
    assert_eq!(kdual(&["reflect", s(&bad)]).status.code(), Some(2));
    assert_eq!(kdual(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kdual(&["reflect", "/no/such/file.json"]).status.code(), Some(1));
    let zero = dir.write("zero.json", &Document::Rep(Rep::scalars(&[0, 0, 0])));
    let o = kdual(&["reflect", s(&zero)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn census_is_byte_identical() {
    let args = ["strata", "--census", "2", "--samples", "4", "--seed", "11"];
    let (a, b) = (kdual(&args), kdual(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(kdual(&["strata", "--census", "2"]).status.code(), Some(1));
}

#[test]
fn quick_selftest_passes() {
    let o = kdual(&["selftest", "--quick"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains(" PASS: ")).count(), 10);
}
