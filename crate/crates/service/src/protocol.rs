//! Wire messages. Every frame is one JSON object tagged by `type`.

use knotforge_core::dynamics::check_safe;
use knotforge_interp::{Message, Session};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClientMsg {
    Command { text: String },
    Drag { component: usize, bead: usize, position: [f64; 3] },
    SketchCommit { points: Vec<[f64; 3]>, closed: bool },
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMsg {
    Snapshot(Snapshot),
    Output { text: String },
    Complaint { text: String },
}

impl From<&Message> for ServerMsg {
    fn from(m: &Message) -> Self {
        match m {
            Message::Output(text) => ServerMsg::Output { text: text.clone() },
            Message::Complaint(text) => ServerMsg::Complaint { text: text.clone() },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Running,
    Stopped,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
pub struct ComponentView {
    pub vertices: Vec<[f64; 3]>,
    pub closed: bool,
    pub hidden: bool,
    pub color: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
pub struct SnapshotParams {
    pub stusplit: i64,
    pub close: f64,
    pub max_dir: f64,
    pub dstep: i64,
}

/// The link as the viewer needs it. `seq` is filled in per connection.
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
pub struct Snapshot {
    pub seq: u64,
    pub components: Vec<ComponentView>,
    pub status: Status,
    pub params: SnapshotParams,
    pub safe: bool,
}

impl Snapshot {
    pub fn of(session: &Session) -> Snapshot {
        let p = &session.params;
        let components = session
            .link
            .components
            .iter()
            .map(|c| ComponentView {
                vertices: c.vertices.iter().map(|v| [v.x, v.y, v.z]).collect(),
                closed: c.closed,
                hidden: c.hidden,
                color: [c.color.r, c.color.g, c.color.b],
            })
            .collect();
        Snapshot {
            seq: 0,
            components,
            status: if session.is_running() { Status::Running } else { Status::Stopped },
            params: SnapshotParams {
                stusplit: p.int("stusplit"),
                close: p.real("close"),
                max_dir: p.real("max-dir"),
                dstep: p.int("dstep"),
            },
            safe: check_safe(&session.link, p.real("close")).safe,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn client_messages_use_the_documented_fields() {
        let m: ClientMsg = serde_json::from_value(json!({"type": "command", "text": "load 3.1"})).unwrap();
        assert_eq!(m, ClientMsg::Command { text: "load 3.1".into() });
        let m: ClientMsg =
            serde_json::from_value(json!({"type": "drag", "component": 0, "bead": 4, "position": [1.0, 2.0, 3.0]}))
                .unwrap();
        assert_eq!(m, ClientMsg::Drag { component: 0, bead: 4, position: [1.0, 2.0, 3.0] });
        let m: ClientMsg = serde_json::from_value(
            json!({"type": "sketch_commit", "points": [[0, 0, 0], [1, 0, 0], [0, 1, 0]], "closed": true}),
        )
        .unwrap();
        assert!(matches!(m, ClientMsg::SketchCommit { closed: true, ref points } if points.len() == 3));
        assert!(serde_json::from_value::<ClientMsg>(json!({"type": "bogus"})).is_err());
    }

    #[test]
    fn server_messages_are_tagged() {
        let v = serde_json::to_value(ServerMsg::Complaint { text: "*** x".into() }).unwrap();
        assert_eq!(v, json!({"type": "complaint", "text": "*** x"}));
        let dir = tempfile::tempdir().unwrap();
        let mut s = Session::new(0, dir.path(), false);
        s.execute("load 2.2.1");
        let v = serde_json::to_value(ServerMsg::Snapshot(Snapshot::of(&s))).unwrap();
        assert_eq!(v["type"], "snapshot");
        assert_eq!(v["status"], "stopped");
        assert_eq!(v["components"].as_array().unwrap().len(), 2);
        assert_eq!(v["params"]["max_dir"], 0.1);
        assert_eq!(v["safe"], true);
    }
}
