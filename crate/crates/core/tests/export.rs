mod common;

use std::io::Write;
use std::process::{Command, Stdio};

use common::{dense_board, evolved_like_policy, random_board, random_policy};
use policy2048::engine::is_game_over;
use policy2048::export::{emit_executable, emit_pseudocode, explain, render_explanation};
use policy2048::policy::decide;
use policy2048::rng::RandomStream;

const DRIVER: &str = r#"
import importlib.util, json, sys
spec = importlib.util.spec_from_file_location("policy", sys.argv[1])
mod = importlib.util.module_from_spec(spec)
spec.loader.exec_module(mod)
for line in sys.stdin:
    print(mod.decide(json.loads(line)))
"#;

fn python() -> Option<&'static str> {
    ["python3", "python"].into_iter().find(|p| Command::new(p).arg("--version").output().is_ok_and(|o| o.status.success()))
}

#[test]
fn exported_module_matches_native_decisions() {
    let Some(py) = python() else {
        eprintln!("python not found, skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let driver = dir.path().join("driver.py");
    std::fs::write(&driver, DRIVER).unwrap();
    let mut rng = RandomStream::new(21);
    for p in 0..12 {
        let policy = if p % 2 == 0 { random_policy(&mut rng) } else { evolved_like_policy(&mut rng, 25) };
        let module = dir.path().join(format!("policy_{p}.py"));
        std::fs::write(&module, emit_executable(&policy)).unwrap();
        let mut boards = Vec::new();
        while boards.len() < 250 {
            let b = if boards.len() % 2 == 0 { random_board(&mut rng) } else { dense_board(&mut rng) };
            if !is_game_over(&b) {
                boards.push(b);
            }
        }
        let mut child = Command::new(py)
            .arg(&driver)
            .arg(&module)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .unwrap();
        let mut stdin = child.stdin.take().unwrap();
        for b in &boards {
            writeln!(stdin, "{}", serde_json::to_string(b.cells()).unwrap()).unwrap();
        }
        drop(stdin);
        let out = child.wait_with_output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let answers: Vec<String> = String::from_utf8(out.stdout).unwrap().lines().map(str::to_owned).collect();
        assert_eq!(answers.len(), boards.len());
        for (b, got) in boards.iter().zip(&answers) {
            let want = decide(&policy, b).unwrap().direction;
            assert_eq!(got, want.as_str(), "policy {} on {b}", policy.to_json());
        }
    }
}

#[test]
fn pseudocode_lists_every_rule_and_the_fallback() {
    let mut rng = RandomStream::new(22);
    for _ in 0..200 {
        let policy = evolved_like_policy(&mut rng, 20);
        let text = emit_pseudocode(&policy);
        assert_eq!(text.matches("if ").count(), policy.rules.len(), "{text}");
        for rule in &policy.rules {
            assert!(text.contains(&format!("move {}", rule.action)));
        }
        assert!(text.contains("otherwise"));
        assert!(!text.contains('{'));
    }
}

#[test]
fn explanation_names_the_chosen_move() {
    let mut rng = RandomStream::new(23);
    for _ in 0..500 {
        let policy = evolved_like_policy(&mut rng, 15);
        let board = random_board(&mut rng);
        if is_game_over(&board) {
            continue;
        }
        let trace = explain(&policy, &board, true).unwrap();
        assert!(trace.rules.iter().all(|r| r.evaluated));
        let text = render_explanation(&policy, &trace);
        assert!(text.contains(&format!("chosen: {}", trace.chosen)));
    }
}
