use std::net::{Ipv4Addr, SocketAddr};
use std::process::ExitCode;

use mathpar_service::{app, Config};

#[tokio::main]
async fn main() -> ExitCode {
    let config = match Config::from_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("mathpar-server: {e}");
            return ExitCode::from(2);
        }
    };
    let addr = SocketAddr::from((Ipv4Addr::LOCALHOST, config.port));
    let listener = match tokio::net::TcpListener::bind(addr).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("mathpar-server: cannot bind {addr}: {e}");
            return ExitCode::from(2);
        }
    };
    eprintln!("mathpar-server listening on http://{addr}");
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    if let Err(e) = axum::serve(listener, app(&config))
        .with_graceful_shutdown(shutdown)
        .await
    {
        eprintln!("mathpar-server: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
