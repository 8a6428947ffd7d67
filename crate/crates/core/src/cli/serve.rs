//! JSON over HTTP for the explorer.
//!
//! | route | effect |
//! |---|---|
//! | `GET /state` | current state |
//! | `POST /reset` | body: a preset `{"preset": "A2"}`, a seed or a triangulation; empty body restarts the default |
//! | `POST /mutate` | `{"vertex": 1}`, 1-based |
//! | `POST /flip` | `{"arc": "1-3"}` (label, compact syntax, or arc object) |
//! | `POST /undo` | revert the last step |
//! | `GET /exchange-graph?radius=R` | seeds within `R` mutations |
//! | `GET /variables` | current cluster, with arcs |
//! | `GET /skein?arc1=..&arc2=..` | smoothing preview |
//!
//! Sessions are chosen by the `X-Session` header or a `session` query
//! parameter and default to `default`. Query values are percent-decoded
//! only, so `+` stays a plus sign (`O2+3` is a valid arc).

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use percent_encoding::percent_decode_str;
use serde::Deserialize;
use serde_json::{json, Value};

use super::session::{Session, SessionError, StartSpec};
use crate::seeds::Limits;
use crate::surface::ArcJson;

#[derive(Clone, Debug, PartialEq)]
pub struct Response {
    pub status: u16,
    pub body: Value,
}

impl Response {
    fn ok(body: Value) -> Response {
        Response { status: 200, body }
    }

    fn error(status: u16, msg: impl std::fmt::Display) -> Response {
        Response { status, body: json!({ "error": msg.to_string() }) }
    }
}

impl From<Result<Value, SessionError>> for Response {
    fn from(r: Result<Value, SessionError>) -> Response {
        r.map_or_else(|e| Response::error(400, e), Response::ok)
    }
}

/// All sessions of one server. Requests to the same session are handled
/// one at a time; different sessions proceed independently.
pub struct Service {
    start: StartSpec,
    limits: Limits,
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
}

#[derive(Deserialize)]
struct MutateBody {
    vertex: usize,
}

#[derive(Deserialize)]
struct FlipBody {
    arc: ArcJson,
}

fn parse_query(q: &str) -> BTreeMap<String, String> {
    q.split('&')
        .filter(|kv| !kv.is_empty())
        .map(|kv| {
            let (k, v) = kv.split_once('=').unwrap_or((kv, ""));
            let decode = |s: &str| percent_decode_str(s).decode_utf8_lossy().into_owned();
            (decode(k), decode(v))
        })
        .collect()
}

fn body_json<T: for<'de> Deserialize<'de>>(body: &str) -> Result<T, Response> {
    serde_json::from_str(body).map_err(|e| Response::error(400, format!("malformed body: {e}")))
}

impl Service {
    pub fn new(start: StartSpec, limits: Limits) -> Result<Service, SessionError> {
        Session::new(start.clone(), limits)?;
        Ok(Service { start, limits, sessions: Mutex::new(HashMap::new()) })
    }

    fn session(&self, token: &str) -> Arc<Mutex<Session>> {
        let mut map = self.sessions.lock().expect("session table lock");
        map.entry(token.to_string())
            .or_insert_with(|| {
                Arc::new(Mutex::new(Session::new(self.start.clone(), self.limits).expect("start was validated")))
            })
            .clone()
    }

    /// Answers one request. `url` is the path with its query string.
    pub fn handle(&self, method: &str, url: &str, body: &str, token: Option<&str>) -> Response {
        let (path, query) = url.split_once('?').unwrap_or((url, ""));
        let query = parse_query(query);
        let token = token.or(query.get("session").map(String::as_str)).unwrap_or("default");
        let handle = self.session(token);
        let mut s = handle.lock().unwrap_or_else(|p| p.into_inner());

        match (method, path) {
            ("GET", "/state") => Response::ok(s.state()),
            ("GET", "/variables") => Response::ok(s.variables()),
            ("GET", "/exchange-graph") => match query.get("radius").map(|r| r.parse::<usize>()).unwrap_or(Ok(1)) {
                Ok(radius) => s.exchange_graph(radius).into(),
                Err(_) => Response::error(400, "radius must be a nonnegative integer"),
            },
            ("GET", "/skein") => match (query.get("arc1"), query.get("arc2")) {
                (Some(a), Some(b)) => s.skein(a, b).into(),
                _ => Response::error(400, "arc1 and arc2 are required"),
            },
            ("POST", "/reset") => {
                let start = if body.trim().is_empty() {
                    self.start.clone()
                } else {
                    match body_json::<StartSpec>(body) {
                        Ok(spec) => spec,
                        Err(r) => return r,
                    }
                };
                match Session::new(start, self.limits) {
                    Ok(fresh) => {
                        *s = fresh;
                        Response::ok(s.state())
                    }
                    Err(e) => Response::error(400, e),
                }
            }
            ("POST", "/mutate") => match body_json::<MutateBody>(body) {
                Ok(b) => s.mutate(b.vertex).map(|()| s.state()).into(),
                Err(r) => r,
            },
            ("POST", "/flip") => match body_json::<FlipBody>(body) {
                Ok(FlipBody { arc: ArcJson::Text(label) }) => s.flip(&label).map(|()| s.state()).into(),
                Ok(FlipBody { arc }) => match arc.to_curve() {
                    Ok(c) => s.flip(&c.to_string()).map(|()| s.state()).into(),
                    Err(e) => Response::error(400, e),
                },
                Err(r) => r,
            },
            ("POST", "/undo") => s.undo().map(|()| s.state()).into(),
            (_, "/state" | "/variables" | "/exchange-graph" | "/skein" | "/reset" | "/mutate" | "/flip" | "/undo") => {
                Response::error(405, format!("{method} not allowed on {path}"))
            }
            _ => Response::error(404, format!("no route {path}")),
        }
    }
}

/// Binds the listening socket; fails when the address is taken.
pub fn bind(addr: &str) -> std::io::Result<tiny_http::Server> {
    tiny_http::Server::http(addr).map_err(std::io::Error::other)
}

/// Serves requests on `workers` threads until the server is unblocked.
pub fn run(server: Arc<tiny_http::Server>, service: Arc<Service>, workers: usize) {
    let threads: Vec<_> = (0..workers.max(1))
        .map(|_| {
            let (server, service) = (server.clone(), service.clone());
            std::thread::spawn(move || {
                while let Ok(rq) = server.recv() {
                    respond(&service, rq);
                }
            })
        })
        .collect();
    for t in threads {
        let _ = t.join();
    }
}

fn respond(service: &Service, mut rq: tiny_http::Request) {
    let mut body = String::new();
    let read = std::io::Read::read_to_string(rq.as_reader(), &mut body);
    let token = rq
        .headers()
        .iter()
        .find(|h| h.field.equiv("X-Session"))
        .map(|h| h.value.as_str().to_string());
    let r = if rq.method() == &tiny_http::Method::Options {
        Response { status: 204, body: Value::Null }
    } else if read.is_err() {
        Response::error(400, "request body is not UTF-8")
    } else {
        service.handle(rq.method().as_str(), rq.url(), &body, token.as_deref())
    };
    let text = if r.body.is_null() { String::new() } else { r.body.to_string() };
    let header = |k: &str, v: &str| tiny_http::Header::from_bytes(k.as_bytes(), v.as_bytes()).expect("static header");
    let response = tiny_http::Response::from_string(text)
        .with_status_code(r.status)
        .with_header(header("Content-Type", "application/json"))
        .with_header(header("Access-Control-Allow-Origin", "*"))
        .with_header(header("Access-Control-Allow-Headers", "Content-Type, X-Session"))
        .with_header(header("Access-Control-Allow-Methods", "GET, POST, OPTIONS"));
    let _ = rq.respond(response);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn service(preset: &str) -> Service {
        Service::new(StartSpec::Preset { preset: preset.into() }, Limits::default()).unwrap()
    }

    #[test]
    fn routes() {
        let s = service("A2");
        let r = s.handle("GET", "/state", "", None);
        assert_eq!(r.status, 200);
        assert_eq!(r.body["cluster"].as_array().unwrap().len(), 2);
        let r = s.handle("POST", "/mutate", r#"{"vertex": 1}"#, None);
        assert_eq!(r.body["history"].as_array().unwrap().len(), 1);
        assert_eq!(s.handle("GET", "/exchange-graph?radius=2", "", None).body["seeds"].as_array().unwrap().len(), 5);
        assert_eq!(s.handle("POST", "/undo", "", None).body["history"], json!([]));
        assert_eq!(s.handle("POST", "/undo", "", None).status, 400);
        assert_eq!(s.handle("GET", "/mutate", "", None).status, 405);
        assert_eq!(s.handle("GET", "/nope", "", None).status, 404);
        assert_eq!(s.handle("POST", "/mutate", "{", None).status, 400);
    }

    #[test]
    fn sessions_are_separate() {
        let s = service("A2");
        s.handle("POST", "/mutate", r#"{"vertex": 2}"#, Some("a"));
        assert_eq!(s.handle("GET", "/state", "", Some("a")).body["history"].as_array().unwrap().len(), 1);
        assert_eq!(s.handle("GET", "/state?session=b", "", None).body["history"], json!([]));
    }

    #[test]
    fn flips_and_skein() {
        let s = service("annulus21");
        let arcs = s.handle("GET", "/state", "", None).body["arcs"].clone();
        let first = arcs[0].as_str().unwrap().to_string();
        let r = s.handle("POST", "/flip", &json!({ "arc": first }).to_string(), None);
        assert_eq!(r.status, 200, "{}", r.body);
        assert_eq!(s.handle("POST", "/reset", r#"{"preset": "hexagon"}"#, None).body["arcs"], json!(["1-3", "1-4", "1-5"]));
        let r = s.handle("POST", "/flip", r#"{"arc": [1, 4]}"#, None);
        assert_eq!(r.body["arcs"], json!(["1-3", "3-5", "1-5"]));
        let r = s.handle("GET", "/skein?arc1=1-4&arc2=3%2D5", "", None);
        assert_eq!(r.body["crossings"], 1, "{}", r.body);
        assert_eq!(s.handle("GET", "/skein?arc1=1-4", "", None).status, 400);
        let vars = s.handle("GET", "/variables", "", None);
        assert_eq!(vars.body["variables"][1]["arc"], "3-5");
    }

    #[test]
    fn query_decoding_keeps_plus() {
        let q = parse_query("arc1=O2+3&arc2=O1-I1%40-1&flag");
        assert_eq!(q["arc1"], "O2+3");
        assert_eq!(q["arc2"], "O1-I1@-1");
        assert_eq!(q["flag"], "");
    }
}
