use std::time::Duration;

use serde_json::{json, Value};

/// Something that answers a yes/no causal prompt with free text.
///
/// `Err` means the call itself failed (network, HTTP status); an answer that
/// cannot be parsed is still `Ok`.
pub trait Oracle: Send + Sync {
    fn model(&self) -> &str;
    fn ask(&self, prompt: &str) -> Result<String, String>;
}

/// Chat-completions style endpoint queried at temperature zero.
#[derive(Debug, Clone)]
pub struct HttpOracle {
    endpoint: String,
    model: String,
    api_key: Option<String>,
    agent: ureq::Agent,
}

impl HttpOracle {
    pub fn new(
        endpoint: impl Into<String>,
        model: impl Into<String>,
        api_key: Option<String>,
    ) -> Self {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(120)))
            .http_status_as_error(true)
            .build();
        Self {
            endpoint: endpoint.into(),
            model: model.into(),
            api_key: api_key.filter(|k| !k.is_empty()),
            agent: ureq::Agent::new_with_config(config),
        }
    }

    /// Reads the bearer token from `LCOS_API_KEY` when set.
    pub fn from_env(endpoint: impl Into<String>, model: impl Into<String>) -> Self {
        Self::new(endpoint, model, std::env::var("LCOS_API_KEY").ok())
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }
}

impl Oracle for HttpOracle {
    fn model(&self) -> &str {
        &self.model
    }

    fn ask(&self, prompt: &str) -> Result<String, String> {
        let body = json!({
            "model": self.model,
            "temperature": 0,
            "messages": [{"role": "user", "content": prompt}],
        });
        let mut req = self
            .agent
            .post(&self.endpoint)
            .header("Content-Type", "application/json");
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req.send(body.to_string()).map_err(|e| e.to_string())?;
        let value: Value = resp.body_mut().read_json().map_err(|e| e.to_string())?;
        extract_content(&value)
            .map(str::to_string)
            .ok_or_else(|| format!("response has no message content: {value}"))
    }
}

// Accepts OpenAI-style `choices`, single `message`, and plain `response` bodies.
fn extract_content(v: &Value) -> Option<&str> {
    v.pointer("/choices/0/message/content")
        .or_else(|| v.pointer("/message/content"))
        .or_else(|| v.get("response"))
        .and_then(Value::as_str)
}

/// Oracle backed by a closure, for synthetic and scripted answers.
pub struct FnOracle<F> {
    model: String,
    f: F,
}

impl<F> FnOracle<F>
where
    F: Fn(&str) -> Result<String, String> + Send + Sync,
{
    pub fn new(model: impl Into<String>, f: F) -> Self {
        Self {
            model: model.into(),
            f,
        }
    }
}

impl<F> Oracle for FnOracle<F>
where
    F: Fn(&str) -> Result<String, String> + Send + Sync,
{
    fn model(&self) -> &str {
        &self.model
    }

    fn ask(&self, prompt: &str) -> Result<String, String> {
        (self.f)(prompt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::{BufRead, BufReader, Read, Write};
    use std::net::TcpListener;

    fn serve_once(status: &str, body: &'static str) -> (String, std::thread::JoinHandle<String>) {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let status = status.to_string();
        let handle = std::thread::spawn(move || {
            let (mut stream, _) = listener.accept().unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut len = 0usize;
            let mut head = String::new();
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                if line == "\r\n" || line.is_empty() {
                    break;
                }
                if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                    len = v.trim().parse().unwrap();
                }
                head.push_str(&line);
            }
            let mut buf = vec![0; len];
            reader.read_exact(&mut buf).unwrap();
            write!(
                stream,
                "HTTP/1.1 {status}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            )
            .unwrap();
            head + &String::from_utf8(buf).unwrap()
        });
        (format!("http://{addr}/v1/chat/completions"), handle)
    }

    #[test]
    fn http_oracle_reads_chat_reply() {
        let (url, server) = serve_once(
            "200 OK",
            r#"{"choices":[{"message":{"role":"assistant","content":"True."}}]}"#,
        );
        let oracle = HttpOracle::new(url, "test-model", Some("secret".into()));
        assert_eq!(oracle.ask("Does it?").unwrap(), "True.");
        let request = server.join().unwrap();
        assert!(request
            .to_ascii_lowercase()
            .contains("authorization: bearer secret"));
        assert!(request.contains("\"temperature\":0"));
        assert!(request.contains("Does it?"));
    }

    #[test]
    fn http_error_is_transport_failure() {
        let (url, server) = serve_once("500 Internal Server Error", "{}");
        let oracle = HttpOracle::new(url, "m", None);
        assert!(oracle.ask("q").is_err());
        server.join().unwrap();
    }

    #[test]
    fn content_shapes() {
        assert_eq!(
            extract_content(&json!({"response": "false"})),
            Some("false")
        );
        assert_eq!(
            extract_content(&json!({"message": {"content": "x"}})),
            Some("x")
        );
        assert_eq!(extract_content(&json!({"other": 1})), None);
    }

    #[test]
    fn closure_oracle() {
        let o = FnOracle::new("fn", |p: &str| Ok(p.len().to_string()));
        assert_eq!(o.ask("abc").unwrap(), "3");
        assert_eq!(o.model(), "fn");
    }
}
