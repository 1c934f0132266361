//! HTTP transport for the dataset cache.

use std::io::Read;
use std::path::Path;
use std::time::Duration;

use swarmcluster::data::{cached_file, fetch_remote, DataSource, Transport};
use swarmcluster::{DatasetSpec, Error};

pub struct HttpTransport {
    agent: ureq::Agent,
}

impl Default for HttpTransport {
    fn default() -> Self {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(60)))
            .build();
        Self { agent: config.into() }
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> swarmcluster::Result<Vec<u8>> {
        let fail = |message: String| Error::Fetch {
            url: url.to_string(),
            message,
        };
        let mut resp = self.agent.get(url).call().map_err(|e| fail(e.to_string()))?;
        let mut bytes = Vec::new();
        resp.body_mut()
            .as_reader()
            .read_to_end(&mut bytes)
            .map_err(|e| fail(e.to_string()))?;
        Ok(bytes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FetchStatus {
    Bundled,
    LocalFile,
    Cached,
    Downloaded,
}

/// Makes `spec` loadable offline, downloading it if it is remote and not
/// yet cached.
pub fn ensure_local(spec: &DatasetSpec, cache_dir: &Path, transport: &dyn Transport) -> swarmcluster::Result<FetchStatus> {
    match &spec.source {
        DataSource::Bundled(_) => Ok(FetchStatus::Bundled),
        DataSource::Path(_) => Ok(FetchStatus::LocalFile),
        DataSource::Url(url) => {
            if cached_file(url, cache_dir)?.is_some() {
                return Ok(FetchStatus::Cached);
            }
            fetch_remote(url, cache_dir, transport)?;
            Ok(FetchStatus::Downloaded)
        }
    }
}
