#include "nl2sql/gateway.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "nl2sql/error.hpp"
#include "nl2sql/file_io.hpp"

namespace nl2sql {

using ojson = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

struct Attempt {
  std::optional<std::string> content;
  std::string error;
  bool transient = false;
  double retry_after_seconds = 0.0;
};

// Sleeps unless the stop token fires first. Returns false when stopped.
bool interruptible_sleep(std::stop_token stop, std::chrono::duration<double> d) {
  std::mutex m;
  std::condition_variable_any cv;
  std::unique_lock lock(m);
  return !cv.wait_for(lock, stop, std::chrono::duration_cast<std::chrono::milliseconds>(d), [] { return false; });
}

class Endpoint {
 public:
  Endpoint(const EndpointConfig& config, std::string token) : config_(config), client_(config.base_url) {
    const auto secs = std::chrono::duration<double>(config.timeout_seconds);
    const auto us = std::chrono::duration_cast<std::chrono::microseconds>(secs);
    client_.set_connection_timeout(us);
    client_.set_read_timeout(us);
    client_.set_write_timeout(us);
    if (!token.empty()) headers_.emplace("Authorization", "Bearer " + token);
  }

  Attempt send(const std::string& body) {
    Attempt a;
    auto res = client_.Post(config_.path, headers_, body, "application/json");
    if (!res) {
      a.error = "connection failed: " + httplib::to_string(res.error());
      a.transient = true;
      return a;
    }
    if (res->status == 429 || res->status >= 500) {
      a.error = "HTTP " + std::to_string(res->status);
      a.transient = true;
      if (res->has_header("Retry-After")) {
        a.retry_after_seconds = std::strtod(res->get_header_value("Retry-After").c_str(), nullptr);
      }
      return a;
    }
    if (res->status < 200 || res->status >= 300) {
      a.error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200);
      return a;
    }
    try {
      a.content = parse_chat_response(res->body);
    } catch (const Error& e) {
      a.error = e.what();
    }
    return a;
  }

 private:
  const EndpointConfig& config_;
  httplib::Client client_;
  httplib::Headers headers_;
};

std::string resolve_token(const EndpointConfig& config) {
  if (config.token_env.empty()) return {};
  const char* value = std::getenv(config.token_env.c_str());
  if (!value || !*value) {
    throw InvalidArgument("AuthMissing", "environment variable " + config.token_env + " is unset or empty");
  }
  return value;
}

}  // namespace

void EndpointConfig::validate() const {
  if (base_url.empty()) throw InvalidArgument("ConfigError", "endpoint base URL is required");
  if (model.empty()) throw InvalidArgument("ConfigError", "model name is required");
  if (max_concurrent < 1) throw InvalidArgument("ConfigError", "max concurrent requests must be >= 1");
  if (!(timeout_seconds > 0.0)) throw InvalidArgument("ConfigError", "request timeout must be > 0");
  if (max_retries < 0) throw InvalidArgument("ConfigError", "max retries must be >= 0");
  if (backoff_base_seconds < 0.0 || backoff_multiplier < 1.0) {
    throw InvalidArgument("ConfigError", "backoff base must be >= 0 and multiplier >= 1");
  }
}

std::vector<BatchItem> build_batch(const CuratedDataset& dataset,
                                   const std::map<std::string, SchemaDescription>& descriptions,
                                   const PromptOptions& options) {
  std::vector<BatchItem> items;
  items.reserve(dataset.items.size());
  std::set<std::string> seen;
  for (const auto& item : dataset.items) {
    const auto& ex = item.example;
    auto it = descriptions.find(ex.db_id);
    if (it == descriptions.end()) {
      throw InvalidArgument("SchemaMismatch", "no schema description for database " + ex.db_id);
    }
    BatchItem b{prediction_key(ex), render_inference_prompt(ex, it->second, options.mode, options.self_correction)};
    if (!seen.insert(b.key).second) throw InvalidArgument("DuplicateKey", "item key " + b.key + " is not unique");
    items.push_back(std::move(b));
  }
  return items;
}

std::string chat_request_body(const EndpointConfig& config, const std::vector<ChatMessage>& messages) {
  ojson j;
  j["model"] = config.model;
  ojson msgs = ojson::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  j["messages"] = std::move(msgs);
  j["temperature"] = config.temperature;
  return j.dump();
}

std::string parse_chat_response(std::string_view body) {
  try {
    const ojson j = ojson::parse(body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const ojson::exception& e) {
    throw FormatError("response", -1, std::string("unexpected chat completion body: ") + e.what());
  }
}

BatchResult run_batch(const std::vector<BatchItem>& items, const EndpointConfig& config,
                      const std::filesystem::path& output, std::stop_token stop, const BatchOptions& options) {
  config.validate();
  const std::string token = resolve_token(config);

  BatchResult result;
  std::map<std::string, Prediction> done;
  if (std::filesystem::exists(output)) {
    auto existing = load_predictions(output);
    for (auto& p : existing.predictions) done.emplace(p.key, std::move(p));
    // Re-write so that new lines are never appended to a torn one.
    if (existing.truncated_tail) {
      PredictionSet clean;
      for (const auto& [k, p] : done) clean.push_back(p);
      save_predictions(clean, output);
    }
  }

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto it = done.find(items[i].key);
    const bool reuse = it != done.end() && !(options.retry_failed && it->second.error);
    if (reuse) {
      ++result.resumed;
    } else {
      pending.push_back(i);
    }
  }

  std::mutex write_mutex;
  std::map<std::string, Prediction> fresh;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> completed{result.resumed};
  {
    if (output.has_parent_path()) std::filesystem::create_directories(output.parent_path());
    std::ofstream log(output, std::ios::binary | std::ios::app);
    if (!log) throw IoError(output.string(), "cannot open for appending");

    auto worker = [&](std::stop_token) {
      Endpoint endpoint(config, token);
      while (!stop.stop_requested()) {
        const std::size_t slot = next++;
        if (slot >= pending.size()) return;
        const BatchItem& item = items[pending[slot]];
        const std::string body = chat_request_body(config, item.messages);

        Prediction p;
        p.key = item.key;
        const auto started = Clock::now();
        bool interrupted = false;
        for (int attempt = 0;; ++attempt) {
          Attempt a = endpoint.send(body);
          if (a.content) {
            p.raw_output = std::move(*a.content);
            p.error.reset();
            break;
          }
          p.error = a.error;
          if (!a.transient || attempt >= config.max_retries) {
            if (a.transient) p.error = "EndpointUnreachable: " + a.error + " after " + std::to_string(attempt) + " retries";
            break;
          }
          const double backoff = config.backoff_base_seconds * std::pow(config.backoff_multiplier, attempt);
          if (!interruptible_sleep(stop, std::chrono::duration<double>(std::max(backoff, a.retry_after_seconds)))) {
            interrupted = true;
            break;
          }
          ++p.retries;
        }
        // A cancelled item is simply left pending for the next run.
        if (interrupted) return;
        p.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();

        std::lock_guard lock(write_mutex);
        log << prediction_to_json_line(p);
        log.flush();
        if (p.error) ++result.failed;
        ++result.requested;
        fresh[p.key] = std::move(p);
        const std::size_t n = ++completed;
        if (options.on_progress) options.on_progress(n, items.size());
      }
    };

    const std::size_t workers = std::min(config.max_concurrent, pending.size());
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (auto& [k, p] : fresh) done[k] = std::move(p);
  result.cancelled = false;
  for (const auto& item : items) {
    auto it = done.find(item.key);
    if (it == done.end()) {
      result.cancelled = true;
      continue;
    }
    result.predictions.push_back(it->second);
  }
  if (!result.cancelled) save_predictions(result.predictions, output);
  return result;
}

}  // namespace nl2sql
