mod common;

use std::fs;
use std::time::Duration;

use common::{api_body, Reply, StubServer};
use li_lab::ingest::{cache_path, parse_ordinates, serialize_ordinates, RemoteClient, ZeroSource};
use li_lab::LiLabError;

const LABEL: &str = "1-1-1.1-r0-0-0";

fn client(server: &StubServer) -> RemoteClient {
    RemoteClient::new(&server.base_url)
        .with_backoff(Duration::from_millis(5))
        .with_timeout(Duration::from_secs(5))
}

#[test]
fn fetch_writes_cache_then_serves_from_it() {
    let body = api_body(&[
        "14.134725141734693790",
        "21.022039638771554993",
        "25.010857580145688763",
    ]);
    let server = StubServer::start(vec![Reply::Ok(body)]);
    let dir = tempfile::tempdir().unwrap();
    let c = client(&server);

    let table = c.fetch(LABEL, 22.0, dir.path()).unwrap();
    assert_eq!(table.len(), 2);
    assert_eq!(table.coverage_height(), 22.0);
    assert_eq!(table.ordinates()[0].text, "14.134725141734693790");
    assert_eq!(server.request_count(), 1);
    let request = &server.requests()[0];
    assert!(
        request.contains("/api/lfunc_lfunctions/?label=1-1-1.1-r0-0-0"),
        "{request}"
    );
    assert!(request.contains("_fields=positive_zeros"));

    let path = cache_path(dir.path(), LABEL, 22.0);
    let cached = fs::read_to_string(&path).unwrap();
    assert_eq!(parse_ordinates(&cached).unwrap(), table);

    // second call: no further request
    let again = c.fetch(LABEL, 22.0, dir.path()).unwrap();
    assert_eq!(again, table);
    assert_eq!(server.request_count(), 1);
    assert!(!dir.path().join(format!("{LABEL}.lock")).exists());
}

#[test]
fn load_dispatches_on_source() {
    let server = StubServer::start(vec![Reply::Ok(api_body(&["3.5", "7.25"]))]);
    let dir = tempfile::tempdir().unwrap();
    let c = client(&server);
    let remote = ZeroSource::remote(LABEL, 100.0).unwrap();
    let t = c.load(&remote, dir.path()).unwrap();
    assert_eq!(t.len(), 2);
    // list ends below the requested height: coverage is the last ordinate
    assert_eq!(t.coverage_height(), 7.25);

    let local = dir.path().join("local.txt");
    fs::write(&local, serialize_ordinates(&t)).unwrap();
    assert_eq!(c.load(&ZeroSource::local(&local), dir.path()).unwrap(), t);
}

#[test]
fn unknown_label_is_reported() {
    let server = StubServer::start(vec![Reply::Status(404)]);
    let dir = tempfile::tempdir().unwrap();
    let err = client(&server)
        .fetch("2-5-1.1-c0-0-0", 10.0, dir.path())
        .unwrap_err();
    assert!(matches!(err, LiLabError::LabelNotFound(_)), "{err:?}");
    assert_eq!(server.request_count(), 1);

    let server = StubServer::start(vec![Reply::Ok("{\"data\": []}".into())]);
    let err = client(&server)
        .fetch("2-5-1.1-c0-0-0", 10.0, dir.path())
        .unwrap_err();
    assert!(matches!(err, LiLabError::LabelNotFound(_)), "{err:?}");
}

#[test]
fn truncated_body_leaves_no_cache_entry() {
    let body = api_body(&["14.134725", "21.022040", "25.010858"]);
    let sent = body.len() / 2;
    let server = StubServer::start(vec![Reply::Truncated { body, sent }]);
    let dir = tempfile::tempdir().unwrap();
    let err = client(&server).fetch(LABEL, 30.0, dir.path()).unwrap_err();
    assert!(matches!(err, LiLabError::MalformedResponse(_)), "{err:?}");
    assert!(!err.is_retryable());
    assert!(!cache_path(dir.path(), LABEL, 30.0).exists());
    let leftovers: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert!(leftovers.is_empty(), "{leftovers:?}");
}

#[test]
fn server_errors_are_retried() {
    let body = api_body(&["14.134725"]);
    let server = StubServer::start(vec![
        Reply::Status(503),
        Reply::Status(500),
        Reply::Ok(body),
    ]);
    let dir = tempfile::tempdir().unwrap();
    let t = client(&server).fetch(LABEL, 20.0, dir.path()).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(server.request_count(), 3);
}

#[test]
fn retries_give_up_after_three_attempts() {
    let server = StubServer::start(vec![
        Reply::Status(503),
        Reply::Status(503),
        Reply::Status(503),
    ]);
    let dir = tempfile::tempdir().unwrap();
    let err = client(&server).fetch(LABEL, 20.0, dir.path()).unwrap_err();
    assert!(matches!(err, LiLabError::Network(_)), "{err:?}");
    assert_eq!(server.request_count(), 3);
    assert!(!cache_path(dir.path(), LABEL, 20.0).exists());
}

#[test]
fn invalid_payload_does_not_replace_valid_cache() {
    let dir = tempfile::tempdir().unwrap();
    let server = StubServer::start(vec![Reply::Ok(api_body(&["14.134725", "21.022040"]))]);
    let good = client(&server).fetch(LABEL, 25.0, dir.path()).unwrap();
    let path = cache_path(dir.path(), LABEL, 25.0);
    let before = fs::read(&path).unwrap();

    // a different height misses the cache; its malformed reply must not touch the old entry
    let server = StubServer::start(vec![Reply::Ok(
        "{\"data\": [{\"positive_zeros\": [\"x\"]}]}".into(),
    )]);
    let err = client(&server).fetch(LABEL, 26.0, dir.path()).unwrap_err();
    assert!(matches!(err, LiLabError::MalformedResponse(_)), "{err:?}");
    assert_eq!(fs::read(&path).unwrap(), before);
    assert!(!cache_path(dir.path(), LABEL, 26.0).exists());
    assert_eq!(
        parse_ordinates(&String::from_utf8(before).unwrap()).unwrap(),
        good
    );
}

#[test]
fn corrupt_cache_entry_is_refetched() {
    let dir = tempfile::tempdir().unwrap();
    let path = cache_path(dir.path(), LABEL, 25.0);
    fs::write(&path, "not a zero file\n").unwrap();
    let server = StubServer::start(vec![Reply::Ok(api_body(&["14.134725"]))]);
    let t = client(&server).fetch(LABEL, 25.0, dir.path()).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(server.request_count(), 1);
}

#[test]
fn concurrent_fetches_of_one_label_hit_the_server_once() {
    let server = StubServer::start(vec![Reply::Ok(api_body(&["14.134725", "21.022040"]))]);
    let dir = tempfile::tempdir().unwrap();
    let c = client(&server);
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..4)
            .map(|_| s.spawn(|| c.fetch(LABEL, 25.0, dir.path())))
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap().unwrap().len(), 2);
        }
    });
    assert_eq!(server.request_count(), 1);
}

#[test]
fn base_url_from_environment() {
    std::env::set_var("LILAB_ZERO_BASE_URL", "http://127.0.0.1:9/");
    assert_eq!(RemoteClient::from_env().base_url(), "http://127.0.0.1:9");
    std::env::remove_var("LILAB_ZERO_BASE_URL");
    assert_eq!(RemoteClient::from_env().base_url(), "https://www.lmfdb.org");
}
