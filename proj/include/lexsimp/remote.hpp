#pragma once

// Line-delimited JSON client for out-of-process model backends.
//
// Request:  {"id": 7, "op": "masked_topk" | "entail" | "embed", "args": {...}}
// Response: {"id": 7, "result": {...}}  or  {"id": 7, "error": "message"}
//
//   masked_topk  args {text, mask_offset, k}       result {tokens: [{word, prob}, ...]}
//                args {text, mask_offset, words}   result {probs: [p, ...]}
//   entail       args {premise, hypothesis}        result {prob}
//   embed        args {word}                       result {vector: [x, ...]}  ([] = OOV)
//
// mask_offset is a byte offset into text. Texts are sent verbatim; the backend
// owns tokenization.

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "json.hpp"
#include "lexsimp/providers.hpp"

namespace lexsimp::remote {

/// Bidirectional line transport.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void write_line(std::string_view line) = 0;
  /// Throws ProviderFailure on EOF.
  virtual std::string read_line() = 0;
};

/// "tcp://host:port" or "exec:<shell command>" (the command's stdin/stdout).
std::unique_ptr<LineChannel> connect(const std::string& endpoint);

/// Channel over two already-open file descriptors. Takes ownership of both.
std::unique_ptr<LineChannel> fd_channel(int read_fd, int write_fd);

std::string encode_request(std::uint64_t id, std::string_view op, const nlohmann::json& args);

/// Returns the "result" object. Throws ProviderFailure on malformed JSON, an
/// id mismatch or an "error" response.
nlohmann::json decode_response(std::string_view line, std::uint64_t expected_id);

/// One request at a time over a channel.
class Client {
 public:
  explicit Client(std::unique_ptr<LineChannel> channel) : channel_(std::move(channel)) {}

  nlohmann::json call(std::string_view op, const nlohmann::json& args);

 private:
  std::unique_ptr<LineChannel> channel_;
  std::uint64_t next_id_ = 1;
  std::mutex mu_;
};

class RemoteMaskedLM final : public MaskedLMProvider {
 public:
  RemoteMaskedLM(std::shared_ptr<Client> client, std::size_t max_sequence_bytes = 1 << 16)
      : client_(std::move(client)), max_sequence_bytes_(max_sequence_bytes) {}

  LmCapabilities capabilities() const override { return {"remote", max_sequence_bytes_}; }
  std::vector<ScoredWord> masked_topk(const MaskedText& input, int k) const override;
  double word_probability(const MaskedText& input, std::string_view word) const override;
  bool concurrent() const override { return false; }

 private:
  std::shared_ptr<Client> client_;
  std::size_t max_sequence_bytes_;
};

class RemoteNLI final : public NLIProvider {
 public:
  explicit RemoteNLI(std::shared_ptr<Client> client) : client_(std::move(client)) {}

  double entail_prob(std::string_view premise, std::string_view hypothesis) const override;
  bool concurrent() const override { return false; }

 private:
  std::shared_ptr<Client> client_;
};

class RemoteEmbedding final : public EmbeddingProvider {
 public:
  explicit RemoteEmbedding(std::shared_ptr<Client> client) : client_(std::move(client)) {}

  std::size_t dimension() const override;
  std::vector<double> embed(std::string_view word) const override;
  bool concurrent() const override { return false; }

 private:
  std::shared_ptr<Client> client_;
  mutable std::mutex mu_;
  mutable std::size_t dimension_ = 0;
};

}  // namespace lexsimp::remote
