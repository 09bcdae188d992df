//! Serves one session to browser clients over a WebSocket.
//!
//! A [`Hub`] owns the session behind a mutex. Commands, drags and sketches
//! from any connection are applied in arrival order; an interactive `go`
//! is advanced `dstep` steps at a time by a background loop that takes the
//! same lock, so client messages land between relaxation steps. Snapshots
//! are broadcast to every connection, each of which numbers them with its
//! own gap-free sequence.

pub mod protocol;

use std::net::SocketAddr;
use std::sync::{Arc, Mutex, MutexGuard};

use axum::extract::ws::{Message as WsMessage, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::{Html, IntoResponse};
use axum::routing::get;
use axum::Router;
use knotforge_core::Vec3;
use knotforge_interp::{Flow, Response, Session};
use tokio::net::TcpListener;
use tokio::sync::{broadcast, Notify};

pub use protocol::{ClientMsg, ComponentView, ServerMsg, Snapshot, SnapshotParams, Status};

const INDEX: &str = include_str!("../assets/index.html");

/// Buffered broadcast events per connection before it counts as lagging.
const BACKLOG: usize = 256;

#[derive(Clone)]
pub struct Hub {
    session: Arc<Mutex<Session>>,
    events: broadcast::Sender<ServerMsg>,
    wake: Arc<Notify>,
}

impl Hub {
    pub fn new(session: Session) -> Hub {
        let (events, _) = broadcast::channel(BACKLOG);
        Hub { session: Arc::new(Mutex::new(session)), events, wake: Arc::new(Notify::new()) }
    }

    /// The session, for inspection. A panic inside a command poisons the
    /// lock; the session is still usable so the poison is ignored.
    pub fn session(&self) -> MutexGuard<'_, Session> {
        self.session.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot::of(&self.session())
    }

    pub fn subscribe(&self) -> broadcast::Receiver<ServerMsg> {
        self.events.subscribe()
    }

    /// Apply one client message. Text replies go back to the caller; a
    /// snapshot is broadcast if the link, view or run state changed.
    pub fn handle(&self, msg: ClientMsg) -> Vec<ServerMsg> {
        let mut s = self.session();
        let was_running = s.is_running();
        let r = match msg {
            ClientMsg::Command { text } => s.execute(&text),
            ClientMsg::Drag { component, bead, position } => s.drag(component, bead, Vec3::from(position)),
            ClientMsg::SketchCommit { points, closed } => {
                let points: Vec<Vec3> = points.into_iter().map(Vec3::from).collect();
                s.sketch_commit(&points, closed)
            }
        };
        let mut replies: Vec<ServerMsg> = r.messages.iter().map(ServerMsg::from).collect();
        match r.flow {
            Flow::Continue => {}
            Flow::Exit => replies.push(ServerMsg::Output { text: "exit ignored while serving".into() }),
            Flow::Die => {
                replies.push(ServerMsg::Complaint { text: "*** duc: panic exit ignored while serving".into() })
            }
        }
        s.revive();
        let running = s.is_running();
        if r.mutated || running != was_running {
            let _ = self.events.send(ServerMsg::Snapshot(Snapshot::of(&s)));
        }
        drop(s);
        if running {
            self.wake.notify_one();
        }
        replies
    }

    /// Advance a running `go` by `dstep` steps. False when nothing runs.
    pub fn step(&self) -> bool {
        let mut s = self.session();
        if !s.is_running() {
            return false;
        }
        let dstep = s.params.count("dstep").max(1) as u64;
        let r: Response = s.tick(dstep);
        for m in &r.messages {
            let _ = self.events.send(m.into());
        }
        s.revive();
        let _ = self.events.send(ServerMsg::Snapshot(Snapshot::of(&s)));
        true
    }

    /// Keep stepping while a `go` is active; sleep otherwise.
    pub async fn relax_loop(self) {
        loop {
            let hub = self.clone();
            let running = tokio::task::spawn_blocking(move || hub.step()).await.unwrap_or(false);
            if running {
                tokio::task::yield_now().await;
            } else {
                self.wake.notified().await;
            }
        }
    }

    pub fn router(self) -> Router {
        Router::new().route("/", get(index)).route("/index.html", get(index)).route("/ws", get(upgrade)).with_state(self)
    }
}

async fn index() -> Html<&'static str> {
    Html(INDEX)
}

async fn upgrade(ws: WebSocketUpgrade, State(hub): State<Hub>) -> impl IntoResponse {
    ws.on_upgrade(move |socket| connection(socket, hub))
}

struct Outbox {
    socket: WebSocket,
    seq: u64,
}

impl Outbox {
    async fn send(&mut self, msg: ServerMsg) -> bool {
        let msg = match msg {
            ServerMsg::Snapshot(mut snap) => {
                self.seq += 1;
                snap.seq = self.seq;
                ServerMsg::Snapshot(snap)
            }
            other => other,
        };
        let text = serde_json::to_string(&msg).expect("messages serialize");
        match self.socket.send(WsMessage::Text(text.into())).await {
            Ok(()) => true,
            Err(e) => {
                log::debug!("send failed: {e}");
                false
            }
        }
    }
}

async fn connection(socket: WebSocket, hub: Hub) {
    let mut events = hub.subscribe();
    let mut out = Outbox { socket, seq: 0 };
    if !out.send(ServerMsg::Snapshot(hub.snapshot())).await {
        return;
    }
    loop {
        tokio::select! {
            incoming = out.socket.recv() => {
                let text = match incoming {
                    Some(Ok(WsMessage::Text(t))) => t,
                    Some(Ok(WsMessage::Close(_))) | None => break,
                    Some(Ok(_)) => continue,
                    Some(Err(e)) => {
                        log::warn!("connection error: {e}");
                        break;
                    }
                };
                let replies = match serde_json::from_str::<ClientMsg>(text.as_str()) {
                    Ok(msg) => {
                        let hub = hub.clone();
                        match tokio::task::spawn_blocking(move || hub.handle(msg)).await {
                            Ok(r) => r,
                            Err(e) => vec![ServerMsg::Complaint { text: format!("*** internal error: {e}") }],
                        }
                    }
                    Err(e) => vec![ServerMsg::Complaint { text: format!("*** bad message: {e}") }],
                };
                for r in replies {
                    if !out.send(r).await {
                        return;
                    }
                }
            }
            event = events.recv() => {
                let msg = match event {
                    Ok(m) => m,
                    // dropped snapshots are replaced by the current state
                    Err(broadcast::error::RecvError::Lagged(_)) => ServerMsg::Snapshot(hub.snapshot()),
                    Err(broadcast::error::RecvError::Closed) => break,
                };
                if !out.send(msg).await {
                    return;
                }
            }
        }
    }
}

/// Serve on an already bound listener until the process ends.
pub async fn serve_on(listener: TcpListener, hub: Hub) -> std::io::Result<()> {
    tokio::spawn(hub.clone().relax_loop());
    axum::serve(listener, hub.router()).await
}

pub async fn serve(session: Session, addr: SocketAddr) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    serve_on(listener, Hub::new(session)).await
}
