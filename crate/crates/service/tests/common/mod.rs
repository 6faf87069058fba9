#![allow(dead_code)]

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

pub async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let body = body.map(|b| b.to_string());
    call_raw(app, method, uri, body).await
}

pub async fn call_raw(app: &Router, method: Method, uri: &str, body: Option<String>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header("content-type", "application/json");
    }
    let req = req.body(body.map(Body::from).unwrap_or_else(Body::empty)).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, value)
}

pub async fn new_session(app: &Router) -> String {
    let (status, body) = call(app, Method::POST, "/sessions", None).await;
    assert_eq!(status, StatusCode::CREATED);
    body["id"].as_str().unwrap().to_string()
}

pub async fn eval(app: &Router, id: &str, source: &str) -> (StatusCode, Value) {
    call(
        app,
        Method::POST,
        &format!("/sessions/{id}/eval"),
        Some(serde_json::json!({ "source": source })),
    )
    .await
}

pub async fn split(app: &Router, id: &str, text: &str) -> Vec<String> {
    let (status, body) = call(
        app,
        Method::POST,
        &format!("/sessions/{id}/document/split"),
        Some(serde_json::json!({ "text": text })),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    serde_json::from_value(body["cells"].clone()).unwrap()
}

pub async fn join(app: &Router, cells: &[String]) -> String {
    let (status, body) = call(
        app,
        Method::POST,
        "/document/join",
        Some(serde_json::json!({ "cells": cells })),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    body["text"].as_str().unwrap().to_string()
}
