#ifndef FASTWORDBUG_REMOTE_HPP
#define FASTWORDBUG_REMOTE_HPP

#include <memory>
#include <string>
#include <vector>

#include "fastwordbug/model.hpp"

namespace fastwordbug::remote {

struct RemoteOptions {
  int timeout_seconds = 5;
  int retries = 0;  // extra attempts after a network failure
};

// JSON-over-HTTP classifier client. Each prediction POSTs
//   {"text": "..."}
// and expects
//   {"labels": ["...", ...], "confidences": [0.., ...]}
// with parallel arrays covering exactly the configured label set (any
// order). Confidences are renormalized when their sum is within 1% of 1,
// otherwise the response is rejected.
class RemoteClassifier : public model::Classifier {
 public:
  RemoteClassifier(const std::string& url,
                   std::vector<std::string> label_names,
                   const RemoteOptions& options = {});

  model::Prediction predict_raw(const std::string& input) const override;
  const std::vector<std::string>& class_names() const override {
    return label_names_;
  }
  const std::string& url() const { return url_; }

 private:
  std::string url_;
  std::string host_;
  int port_ = 80;
  std::string path_;
  std::vector<std::string> label_names_;
  RemoteOptions options_;
};

// Maps a raw response body onto a Prediction ordered like label_names.
// Exposed separately so the protocol can be tested without a live server.
model::Prediction parse_remote_response(
    const std::string& body, const std::vector<std::string>& label_names);

std::unique_ptr<model::Classifier> remote_classifier(
    const std::string& url, std::vector<std::string> label_names,
    const RemoteOptions& options = {});

// Blocking mock server speaking the wire protocol above; serves POST on
// both "/" and "/predict" plus GET /health. Runs until stop() is called
// from another thread.
class MockServer {
 public:
  explicit MockServer(model::BowClassifier classifier);
  ~MockServer();

  // Binds immediately; returns the chosen port (port 0 picks a free one).
  int start(int port);
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fastwordbug::remote

#endif  // FASTWORDBUG_REMOTE_HPP
