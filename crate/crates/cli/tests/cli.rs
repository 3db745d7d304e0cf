use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use influence_cli::{exit, Manifest};

fn influence(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_influence")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

/// Lines after the manifest header.
fn body(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with("#manifest "))
        .map(|l| format!("{l}\n"))
        .collect()
}

/// i posts a, b, c; j retweets one of them and posts two URLs of its own;
/// k posts three unrelated URLs.
const THREE_USERS: &str = "\
1\ti\ta\tM
2\ti\tb\tM
3\ti\tc\tM
4\tj\ta\tRT\ti
5\tj\td\tM
6\tj\te\tM
7\tk\tx\tM
8\tk\ty\tM
9\tk\tz\tM
";

#[test]
fn build_rt_three_user_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let events = write(dir.path(), "events.tsv", THREE_USERS);
    let out = dir.path().join("out");
    let o = influence(&["build", "--events", &events, "--graph-type", "rt", "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(body(&out.join("graph.tsv")), "#nodes=3 arcs=1\ni\tj\t0.3333333333333333\nk\t-\t-\n");
    let stats = body(&out.join("graph_stats.tsv"));
    assert!(stats.contains("arcs\t1\n") && stats.contains("mean_weight\t0.33333333333333331\n"));
}

#[test]
fn ip_on_arcless_graph_exits_with_empty_graph_code() {
    let dir = tempfile::tempdir().unwrap();
    let events = write(dir.path(), "events.tsv", "1\ti\ta\tM\n2\tj\tb\tM\n");
    let o = influence(&["ip", "--events", &events, "--min-urls", "1", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(exit::EMPTY_GRAPH));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no arcs"));
    assert!(!dir.path().join("ip_scores.tsv").exists());
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let events = write(dir.path(), "events.tsv", THREE_USERS);
    let bad = write(dir.path(), "bad.tsv", "1\ti\ta\tM\nnot an event\n");

    let code = |args: &[&str]| influence(args).status.code();
    assert_eq!(code(&["ip", "--out-dir", d]), Some(exit::MISSING_INPUT));
    assert_eq!(code(&["ip", "--events", "/no/such/file", "--out-dir", d]), Some(exit::MISSING_INPUT));
    assert_eq!(code(&["build", "--events", &events, "--graph-type", "comention", "--out-dir", d]), Some(exit::MISSING_INPUT));
    assert_eq!(code(&["ip", "--events", &events, "--graph-type", "web", "--out-dir", d]), Some(exit::CONFIG_INVALID));
    assert_eq!(code(&["pagerank", "--events", &events, "--damping", "1.5", "--out-dir", d]), Some(exit::CONFIG_INVALID));
    assert_eq!(code(&["rank", "--events", &events, "--measure", "klout", "--out-dir", d]), Some(exit::CONFIG_INVALID));
    assert_eq!(code(&["build", "--events", &bad, "--out-dir", d]), Some(exit::INPUT_PARSE));
    assert_eq!(code(&["build", "--events", &bad, "--strict", "--lenient", "--out-dir", d]), Some(2));
    assert_eq!(code(&["build", "--events", &bad, "--lenient", "--min-urls", "1", "--out-dir", d]), Some(exit::OK));
}

#[test]
fn every_output_carries_a_round_tripping_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let out = dir.path().join("out");
    assert!(influence(&["synth", "--seed", "3", "--out-dir", data.to_str().unwrap()]).status.success());
    let p = |n: &str| data.join(n).to_str().unwrap().to_owned();
    let (events, follows, clicks) = (p("events.tsv"), p("follows.tsv"), p("clicks.tsv"));
    for cmd in ["build", "ip", "pagerank", "hindex", "rates", "curve", "rank", "compare"] {
        let o = influence(&[
            cmd, "--events", &events, "--follows", &follows, "--clicks", &clicks, "--out-dir", out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }

    let sha = influence_cli::manifest::sha256_hex(&fs::read(&events).unwrap());
    let mut seen = 0;
    for dir in [&data, &out] {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            let text = fs::read_to_string(&path).unwrap();
            let m = Manifest::parse(&text).unwrap();
            assert_eq!(m.get("tool"), Some("influence"), "{}", path.display());
            assert_eq!(m.get("output"), path.file_name().unwrap().to_str());
            if dir == &out {
                assert_eq!(m.get("input.events.sha256"), Some(sha.as_str()), "{}", path.display());
                assert!(m.get("param.graph-type").is_some());
                assert!(m.get("param.threads").is_none());
            }
            let mut header = Vec::new();
            m.write_to(&mut header).unwrap();
            assert!(text.starts_with(std::str::from_utf8(&header).unwrap()));
            seen += 1;
        }
    }
    assert_eq!(seen, 3 + 12);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "events.tsv", THREE_USERS);
    let cfg = write(dir.path(), "run.cfg", "# relative to this file\nevents = events.tsv\ngraph-type = comention\nout-dir = out\nmin-urls = 3\n");
    // comention needs follows; the flag switches to rt
    let o = influence(&["build", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(exit::MISSING_INPUT));
    let o = influence(&["build", "--config", &cfg, "--graph-type", "rt"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("out/graph.tsv")).unwrap();
    let m = Manifest::parse(&text).unwrap();
    assert_eq!(m.get("param.graph-type"), Some("rt"));
    assert_eq!(m.get("param.min-urls"), Some("3"));

    let bad = write(dir.path(), "bad.cfg", "colour = red\n");
    assert_eq!(influence(&["build", "--config", &bad]).status.code(), Some(exit::CONFIG_INVALID));
}

#[test]
fn graph_file_and_score_files_feed_later_commands() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    assert!(influence(&["synth", "--seed", "5", "--out-dir", data.to_str().unwrap()]).status.success());
    let events = data.join("events.tsv");
    let events = events.to_str().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let (a_s, b_s) = (a.to_str().unwrap(), b.to_str().unwrap());

    assert!(influence(&["build", "--events", events, "--out-dir", a_s]).status.success());
    assert!(influence(&["ip", "--events", events, "--out-dir", a_s]).status.success());
    let graph = a.join("graph.tsv");
    assert!(influence(&["ip", "--graph", graph.to_str().unwrap(), "--out-dir", b_s]).status.success());
    assert_eq!(body(&a.join("ip_scores.tsv")), body(&b.join("ip_scores.tsv")));
    assert_eq!(body(&a.join("ip_trace.tsv")), body(&b.join("ip_trace.tsv")));

    // A saved pagerank vector compared against a recomputed one.
    assert!(influence(&["pagerank", "--events", events, "--out-dir", a_s]).status.success());
    let saved = format!("file:{}", a.join("pagerank.tsv").display());
    let o = influence(&["compare", "--events", events, "--measure", &saved, "--against", "pagerank", "--out-dir", b_s]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = body(&b.join("compare_pagerank_vs_pagerank.tsv"));
    assert!(report.lines().last().unwrap().starts_with("#spearman=1 "), "{report}");
}

#[test]
fn rank_respects_eligibility() {
    let dir = tempfile::tempdir().unwrap();
    let events = write(dir.path(), "events.tsv", THREE_USERS);
    let d = dir.path().to_str().unwrap();
    let o = influence(&["rank", "--events", &events, "--measure", "posted-urls", "--min-posted", "3", "--out-dir", d]);
    assert!(o.status.success());
    assert_eq!(body(&dir.path().join("top_posted-urls.tsv")), "#rank\tuser\tposted-urls\n1\ti\t3\n2\tj\t3\n3\tk\t3\n");
    let o = influence(&["rank", "--events", &events, "--measure", "retweets", "--top-k", "1", "--out-dir", d]);
    assert!(o.status.success());
    assert_eq!(body(&dir.path().join("top_retweets.tsv")), "#rank\tuser\tretweets\n1\ti\t1\n");
}
