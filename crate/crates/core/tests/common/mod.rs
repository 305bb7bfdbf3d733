//! Scripted HTTP server for hermetic fetch tests.

#![allow(dead_code)]

use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::{Arc, Mutex};
use std::thread::{self, JoinHandle};

#[derive(Debug, Clone)]
pub enum Reply {
    /// Full response with a correct `Content-Length`.
    Ok(String),
    Status(u16),
    /// Announces the full length but closes after sending `sent` bytes.
    Truncated {
        body: String,
        sent: usize,
    },
}

pub struct StubServer {
    pub base_url: String,
    requests: Arc<Mutex<Vec<String>>>,
    handle: Option<JoinHandle<()>>,
}

impl StubServer {
    /// Serve the given replies in order, one per connection, then stop.
    pub fn start(replies: Vec<Reply>) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind stub server");
        let base_url = format!("http://{}", listener.local_addr().unwrap());
        let requests = Arc::new(Mutex::new(Vec::new()));
        let log = Arc::clone(&requests);
        let handle = thread::spawn(move || {
            for reply in replies {
                let Ok((stream, _)) = listener.accept() else {
                    return;
                };
                if let Some(line) = handle_one(stream, &reply) {
                    log.lock().unwrap().push(line);
                }
            }
        });
        Self {
            base_url,
            requests,
            handle: Some(handle),
        }
    }

    /// Request lines seen so far.
    pub fn requests(&self) -> Vec<String> {
        self.requests.lock().unwrap().clone()
    }

    pub fn request_count(&self) -> usize {
        self.requests.lock().unwrap().len()
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        // Unblock a pending accept if not every scripted reply was consumed.
        let addr = self.base_url.trim_start_matches("http://").to_string();
        let _ = TcpStream::connect(addr);
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

fn handle_one(mut stream: TcpStream, reply: &Reply) -> Option<String> {
    let mut reader = BufReader::new(stream.try_clone().ok()?);
    let mut request_line = String::new();
    reader.read_line(&mut request_line).ok()?;
    if request_line.is_empty() {
        return None;
    }
    loop {
        let mut header = String::new();
        if reader.read_line(&mut header).ok()? == 0 || header == "\r\n" {
            break;
        }
    }
    let (status, body, sent) = match reply {
        Reply::Ok(body) => (200, body.clone(), body.len()),
        Reply::Status(code) => (*code, String::from("{}"), 2),
        Reply::Truncated { body, sent } => (200, body.clone(), *sent),
    };
    let head = format!(
        "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        body.len()
    );
    let _ = stream.write_all(head.as_bytes());
    let _ = stream.write_all(&body.as_bytes()[..sent.min(body.len())]);
    let _ = stream.flush();
    Some(request_line.trim_end().to_string())
}

/// A response body in the remote API's shape.
pub fn api_body(zeros: &[&str]) -> String {
    format!(
        "{{\"data\": [{{\"positive_zeros\": [{}]}}]}}",
        zeros.join(", ")
    )
}
