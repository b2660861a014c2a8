//! The HTTP backend against a local stand-in for a chat-completions server.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use hangul_obfus::remote::{HttpConfig, HttpSource, RemoteSource, ReplaySource, TranslitMode, LATIN_PROMPT};
use hangul_obfus::rules::transliteration::Backend;
use hangul_obfus::{Error, FirstChoice, Obfuscator};
use serde_json::{json, Value};

type Captured = Arc<Mutex<Vec<(Vec<String>, Value)>>>;
type Reply = Arc<dyn Fn(&str) -> String + Send + Sync>;

struct Server {
    url: String,
    requests: Captured,
    peak: Arc<AtomicUsize>,
}

fn read_request(stream: &mut TcpStream) -> (Vec<String>, Value) {
    let mut reader = BufReader::new(stream.try_clone().unwrap());
    let mut headers = Vec::new();
    let mut len = 0;
    loop {
        let mut line = String::new();
        reader.read_line(&mut line).unwrap();
        let line = line.trim_end().to_string();
        if line.is_empty() {
            break;
        }
        if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
            len = v.trim().parse().unwrap();
        }
        headers.push(line);
    }
    let mut body = vec![0; len];
    reader.read_exact(&mut body).unwrap();
    (headers, serde_json::from_slice(&body).unwrap())
}

/// Serves each connection on its own thread. `reply` maps the user message
/// to the assistant's content.
fn serve(reply: Reply, delay: Duration) -> Server {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/v1", listener.local_addr().unwrap());
    let requests = Arc::new(Mutex::new(Vec::new()));
    let peak = Arc::new(AtomicUsize::new(0));
    let active = Arc::new(AtomicUsize::new(0));
    let (reqs, pk) = (requests.clone(), peak.clone());
    thread::spawn(move || {
        for stream in listener.incoming() {
            let mut stream = stream.unwrap();
            let (reqs, pk, active, reply) = (reqs.clone(), pk.clone(), active.clone(), reply.clone());
            thread::spawn(move || {
                let now = active.fetch_add(1, Ordering::SeqCst) + 1;
                pk.fetch_max(now, Ordering::SeqCst);
                let (headers, body) = read_request(&mut stream);
                let user = body["messages"][1]["content"].as_str().unwrap_or("").to_string();
                reqs.lock().unwrap().push((headers, body));
                thread::sleep(delay);
                let payload = json!({ "choices": [{ "message": { "role": "assistant", "content": reply(&user) } }] });
                let payload = payload.to_string();
                active.fetch_sub(1, Ordering::SeqCst);
                let _ = write!(
                    stream,
                    "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
                    payload.len(),
                    payload
                );
            });
        }
    });
    Server { url, requests, peak }
}

fn config(url: &str) -> HttpConfig {
    HttpConfig {
        base_url: url.to_string(),
        model: "test-model".into(),
        api_key: Some("sk-test".into()),
        max_in_flight: 2,
        timeout: Duration::from_secs(10),
        log_path: None,
    }
}

fn answer(input: &str, output: &str) -> String {
    format!("```json\n{}\n```", json!({ "input": input, "output": output }))
}

#[test]
fn latin_rule_through_http_and_replay() {
    let server = serve(
        Arc::new(|user| answer(user, &user.replacen("망했다고", "mang했다고", 1))),
        Duration::ZERO,
    );
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("exchanges.jsonl");
    let src = HttpSource::new(HttpConfig { log_path: Some(log.clone()), ..config(&server.url) }).unwrap();
    let ob = Obfuscator { backend: Backend::Remote(Arc::new(src)), ..Obfuscator::default() };
    let out = ob.apply_rule("시험 망했다고", 12, &mut FirstChoice).unwrap();
    assert_eq!(out.render(), "시험 mang했다고");
    assert_eq!(out.sites, 1);
    assert_eq!(hangul_obfus::patch::revert("시험 mang했다고", &out.edits).unwrap(), "시험 망했다고");

    let requests = server.requests.lock().unwrap();
    let (headers, body) = &requests[0];
    assert!(headers[0].starts_with("POST /v1/chat/completions"));
    assert!(headers.iter().any(|h| h == "authorization: Bearer sk-test" || h == "Authorization: Bearer sk-test"));
    assert_eq!(body["model"], "test-model");
    assert_eq!(body["messages"][0]["content"], LATIN_PROMPT);
    assert_eq!(body["messages"][1]["content"], "시험 망했다고");

    let replay = ReplaySource::load(&log).unwrap();
    assert_eq!(replay.query(TranslitMode::Latin, "시험 망했다고").unwrap(), "시험 mang했다고");
    assert!(matches!(replay.query(TranslitMode::Semantic, "시험 망했다고"), Err(Error::BackendUnavailable(_))));
}

#[test]
fn answers_over_the_word_cap_are_rejected() {
    // Two of two words changed; the cap for a two-word sentence is one.
    let server = serve(Arc::new(|user| answer(user, "Sㅣ험 mang했다")), Duration::ZERO);
    let src = HttpSource::new(config(&server.url)).unwrap();
    let ob = Obfuscator { backend: Backend::Remote(Arc::new(src)), ..Obfuscator::default() };
    let err = ob.apply_rule("시험 망했다", 12, &mut FirstChoice).unwrap_err();
    assert!(matches!(err, Error::RemoteCapExceeded { altered: 2, cap: 1 }), "{err}");
}

#[test]
fn malformed_and_unreachable() {
    let server = serve(Arc::new(|_| "I cannot help with that.".into()), Duration::ZERO);
    let src = HttpSource::new(config(&server.url)).unwrap();
    assert!(matches!(src.query(TranslitMode::Semantic, "가지 마"), Err(Error::MalformedRemoteResponse(_))));

    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let src = HttpSource::new(config(&format!("http://127.0.0.1:{port}/v1"))).unwrap();
    assert!(matches!(src.query(TranslitMode::Latin, "가"), Err(Error::BackendUnavailable(_))));
}

#[test]
fn requests_in_flight_are_bounded() {
    let server = serve(Arc::new(|user| answer(user, user)), Duration::from_millis(60));
    let src = Arc::new(HttpSource::new(config(&server.url)).unwrap());
    let handles: Vec<_> = (0..8)
        .map(|i| {
            let src = src.clone();
            thread::spawn(move || src.query(TranslitMode::Latin, &format!("문장 {i}")).unwrap())
        })
        .collect();
    for h in handles {
        h.join().unwrap();
    }
    assert_eq!(server.requests.lock().unwrap().len(), 8);
    assert!(server.peak.load(Ordering::SeqCst) <= 2);
}
