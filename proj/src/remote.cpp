#include "fastwordbug/remote.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "fastwordbug/errors.hpp"
#include "httplib.h"
#include "json.hpp"

namespace fastwordbug::remote {

namespace {

struct ParsedUrl {
  std::string host;
  int port = 80;
  std::string path = "/";
};

ParsedUrl parse_url(const std::string& url) {
  std::string rest = url;
  if (rest.rfind("http://", 0) == 0) {
    rest = rest.substr(7);
  } else if (rest.rfind("https://", 0) == 0) {
    throw std::invalid_argument("https endpoints are not supported: " + url);
  }
  ParsedUrl out;
  std::size_t slash = rest.find('/');
  std::string authority = rest.substr(0, slash);
  if (slash != std::string::npos) out.path = rest.substr(slash);
  std::size_t colon = authority.find(':');
  if (colon == std::string::npos) {
    out.host = authority;
  } else {
    out.host = authority.substr(0, colon);
    out.port = std::stoi(authority.substr(colon + 1));
  }
  if (out.host.empty()) {
    throw std::invalid_argument("remote URL has no host: " + url);
  }
  return out;
}

}  // namespace

model::Prediction parse_remote_response(
    const std::string& body, const std::vector<std::string>& label_names) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw RemoteError(RemoteError::Kind::MalformedResponse,
                      std::string("response is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("labels") || !j.contains("confidences") ||
      !j["labels"].is_array() || !j["confidences"].is_array() ||
      j["labels"].size() != j["confidences"].size()) {
    throw RemoteError(RemoteError::Kind::MalformedResponse,
                      "expected parallel \"labels\" and \"confidences\" "
                      "arrays");
  }

  std::vector<double> ordered(label_names.size(), -1.0);
  for (std::size_t i = 0; i < j["labels"].size(); ++i) {
    if (!j["labels"][i].is_string() || !j["confidences"][i].is_number()) {
      throw RemoteError(RemoteError::Kind::MalformedResponse,
                        "labels must be strings and confidences numbers");
    }
    std::string name = j["labels"][i].get<std::string>();
    auto it = std::find(label_names.begin(), label_names.end(), name);
    if (it == label_names.end()) {
      throw RemoteError(RemoteError::Kind::LabelMismatch,
                        "unexpected label in response: " + name);
    }
    std::size_t idx = static_cast<std::size_t>(it - label_names.begin());
    if (ordered[idx] >= 0.0) {
      throw RemoteError(RemoteError::Kind::LabelMismatch,
                        "duplicate label in response: " + name);
    }
    double value = j["confidences"][i].get<double>();
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw RemoteError(RemoteError::Kind::MalformedResponse,
                        "confidence out of range");
    }
    ordered[idx] = value;
  }
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (ordered[i] < 0.0) {
      throw RemoteError(RemoteError::Kind::LabelMismatch,
                        "response missing label: " + label_names[i]);
    }
  }

  double sum = 0.0;
  for (double v : ordered) sum += v;
  if (std::abs(sum - 1.0) > 0.01 + 1e-12) {
    throw RemoteError(RemoteError::Kind::MalformedResponse,
                      "confidences sum to " + std::to_string(sum) +
                          ", outside the 1% renormalization band");
  }
  // skip the division when the sum is already 1 within noise, so local and
  // remote predictions stay bit-identical
  if (std::abs(sum - 1.0) > 1e-9) {
    for (double& v : ordered) v /= sum;
  }
  return model::Prediction::from_confidences(std::move(ordered));
}

RemoteClassifier::RemoteClassifier(const std::string& url,
                                   std::vector<std::string> label_names,
                                   const RemoteOptions& options)
    : url_(url), label_names_(std::move(label_names)), options_(options) {
  if (label_names_.empty()) {
    throw std::invalid_argument("remote classifier needs label names");
  }
  ParsedUrl parsed = parse_url(url);
  host_ = parsed.host;
  port_ = parsed.port;
  path_ = parsed.path;
}

model::Prediction RemoteClassifier::predict_raw(
    const std::string& input) const {
  nlohmann::json request;
  request["text"] = input;
  const std::string body = request.dump();

  std::string error_text;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    httplib::Client client(host_, port_);
    client.set_connection_timeout(options_.timeout_seconds);
    client.set_read_timeout(options_.timeout_seconds);
    httplib::Result res = client.Post(path_, body, "application/json");
    if (!res) {
      error_text = httplib::to_string(res.error());
      continue;  // network failures are the only retried case
    }
    if (res->status != 200) {
      throw RemoteError(RemoteError::Kind::HttpStatus,
                        "endpoint returned HTTP " +
                            std::to_string(res->status));
    }
    return parse_remote_response(res->body, label_names_);
  }
  throw RemoteError(RemoteError::Kind::Network,
                    "cannot reach " + url_ + ": " + error_text);
}

std::unique_ptr<model::Classifier> remote_classifier(
    const std::string& url, std::vector<std::string> label_names,
    const RemoteOptions& options) {
  return std::make_unique<RemoteClassifier>(url, std::move(label_names),
                                            options);
}

struct MockServer::Impl {
  model::BowClassifier classifier;
  httplib::Server server;
  std::thread thread;

  explicit Impl(model::BowClassifier clf) : classifier(std::move(clf)) {}
};

MockServer::MockServer(model::BowClassifier classifier)
    : impl_(std::make_unique<Impl>(std::move(classifier))) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json request;
    try {
      request = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception&) {
      res.status = 400;
      res.set_content("{\"error\":\"body is not JSON\"}", "application/json");
      return;
    }
    if (!request.is_object() || !request.contains("text") ||
        !request["text"].is_string()) {
      res.status = 400;
      res.set_content("{\"error\":\"expected {\\\"text\\\": ...}\"}",
                      "application/json");
      return;
    }
    model::Prediction p =
        impl_->classifier.predict_raw(request["text"].get<std::string>());
    nlohmann::json response;
    response["labels"] = impl_->classifier.class_names();
    response["confidences"] = p.confidences;
    res.set_content(response.dump(), "application/json");
  };
  impl_->server.Post("/", handler);
  impl_->server.Post("/predict", handler);
  impl_->server.Get("/health", [](const httplib::Request&,
                                  httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });
}

MockServer::~MockServer() { stop(); }

int MockServer::start(int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port("127.0.0.1");
    if (bound < 0) throw IoError("mock server: no free port");
  } else if (!impl_->server.bind_to_port("127.0.0.1", port)) {
    throw IoError("mock server: cannot bind port " + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  return bound;
}

void MockServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

void MockServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace fastwordbug::remote
