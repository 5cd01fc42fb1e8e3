#include "lexsimp/remote.hpp"

#include <netdb.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <cstring>

#include "lexsimp/error.hpp"

namespace lexsimp::remote {

namespace {

std::string errno_message(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

/// Buffered line reader/writer over a pair of file descriptors.
class FdChannel : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) {}

  ~FdChannel() override {
    if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
    if (read_fd_ >= 0) ::close(read_fd_);
  }

  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  void write_line(std::string_view line) override {
    std::string buf(line);
    buf.push_back('\n');
    std::size_t sent = 0;
    while (sent < buf.size()) {
      ssize_t n = is_socket_ ? ::send(write_fd_, buf.data() + sent, buf.size() - sent, MSG_NOSIGNAL) : -1;
      if (n < 0 && errno == ENOTSOCK) is_socket_ = false;
      if (!is_socket_) n = ::write(write_fd_, buf.data() + sent, buf.size() - sent);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ProviderFailure(errno_message("remote write failed"));
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  std::string read_line() override {
    while (true) {
      const std::size_t nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      char chunk[4096];
      const ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ProviderFailure(errno_message("remote read failed"));
      }
      if (n == 0) throw ProviderFailure("remote backend closed the connection");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 protected:
  void close_write() {
    if (write_fd_ >= 0 && write_fd_ != read_fd_) {
      ::close(write_fd_);
      write_fd_ = -1;
    }
  }

 private:
  int read_fd_;
  int write_fd_;
  bool is_socket_ = true;  // cleared on the first ENOTSOCK
  std::string buffer_;
};

/// Child process speaking the protocol on stdin/stdout.
class ProcessChannel final : public FdChannel {
 public:
  ProcessChannel(int read_fd, int write_fd, pid_t pid) : FdChannel(read_fd, write_fd), pid_(pid) {}

  ~ProcessChannel() override {
    close_write();
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }

 private:
  pid_t pid_;
};

std::unique_ptr<LineChannel> spawn(const std::string& command) {
  // A dead backend must surface as a write error, not kill the process.
  std::signal(SIGPIPE, SIG_IGN);
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) throw ProviderFailure(errno_message("pipe"));
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw ProviderFailure(errno_message("pipe"));
  }
  const pid_t pid = ::fork();
  if (pid < 0) throw ProviderFailure(errno_message("fork"));
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  return std::make_unique<ProcessChannel>(from_child[0], to_child[1], pid);
}

std::unique_ptr<LineChannel> dial(const std::string& host, const std::string& port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  const int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &found);
  if (rc != 0) throw ProviderFailure("cannot resolve " + host + ": " + ::gai_strerror(rc));
  int fd = -1;
  for (addrinfo* ai = found; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(found);
  if (fd < 0) throw ProviderFailure("cannot connect to " + host + ":" + port);
  std::signal(SIGPIPE, SIG_IGN);
  return std::make_unique<FdChannel>(fd, fd);
}

}  // namespace

std::unique_ptr<LineChannel> connect(const std::string& endpoint) {
  if (endpoint.starts_with("exec:")) {
    const std::string command = endpoint.substr(5);
    if (command.empty()) throw ProviderFailure("empty exec endpoint");
    return spawn(command);
  }
  if (endpoint.starts_with("tcp://")) {
    const std::string rest = endpoint.substr(6);
    const std::size_t colon = rest.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == rest.size()) {
      throw ProviderFailure("endpoint must be tcp://host:port, got " + endpoint);
    }
    return dial(rest.substr(0, colon), rest.substr(colon + 1));
  }
  throw ProviderFailure("unsupported endpoint '" + endpoint + "' (expected tcp://host:port or exec:command)");
}

std::unique_ptr<LineChannel> fd_channel(int read_fd, int write_fd) {
  return std::make_unique<FdChannel>(read_fd, write_fd);
}

std::string encode_request(std::uint64_t id, std::string_view op, const nlohmann::json& args) {
  nlohmann::json req;
  req["id"] = id;
  req["op"] = op;
  req["args"] = args;
  return req.dump();
}

nlohmann::json decode_response(std::string_view line, std::uint64_t expected_id) {
  nlohmann::json resp;
  try {
    resp = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProviderFailure(std::string("malformed response: ") + e.what());
  }
  if (!resp.is_object()) throw ProviderFailure("response is not a JSON object");
  const auto id = resp.find("id");
  if (id == resp.end() || !id->is_number_unsigned() || id->get<std::uint64_t>() != expected_id) {
    throw ProviderFailure("response id does not match request " + std::to_string(expected_id));
  }
  if (const auto err = resp.find("error"); err != resp.end() && !err->is_null()) {
    throw ProviderFailure("backend error: " + (err->is_string() ? err->get<std::string>() : err->dump()));
  }
  const auto result = resp.find("result");
  if (result == resp.end() || !result->is_object()) throw ProviderFailure("response has no result object");
  return *result;
}

nlohmann::json Client::call(std::string_view op, const nlohmann::json& args) {
  std::lock_guard lock(mu_);
  const std::uint64_t id = next_id_++;
  channel_->write_line(encode_request(id, op, args));
  return decode_response(channel_->read_line(), id);
}

namespace {

double checked_probability(const nlohmann::json& v, const char* what) {
  if (!v.is_number()) throw ProviderFailure(std::string(what) + ": probability is not a number");
  const double p = v.get<double>();
  if (!(p >= 0.0 && p <= 1.0)) throw ProviderFailure(std::string(what) + ": probability outside [0,1]");
  return p;
}

}  // namespace

std::vector<ScoredWord> RemoteMaskedLM::masked_topk(const MaskedText& input, int k) const {
  if (k < 1) throw ProviderFailure("masked_topk: k must be positive");
  check_single_mask(input);
  if (input.text.size() > max_sequence_bytes_) throw SequenceTooLong("masked_topk input too long");
  const nlohmann::json result =
      client_->call("masked_topk", {{"text", input.text}, {"mask_offset", input.mask_offset}, {"k", k}});
  const auto tokens = result.find("tokens");
  if (tokens == result.end() || !tokens->is_array()) throw ProviderFailure("masked_topk: missing tokens");
  std::vector<ScoredWord> raw;
  raw.reserve(tokens->size());
  try {
    for (const auto& t : *tokens) {
      raw.push_back({t.at("word").get<std::string>(), checked_probability(t.at("prob"), "masked_topk")});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ProviderFailure(std::string("masked_topk: bad token entry: ") + e.what());
  }
  return select_topk_words(std::move(raw), k);
}

double RemoteMaskedLM::word_probability(const MaskedText& input, std::string_view word) const {
  check_single_mask(input);
  if (input.text.size() > max_sequence_bytes_) throw SequenceTooLong("masked_topk input too long");
  const nlohmann::json result = client_->call(
      "masked_topk",
      {{"text", input.text}, {"mask_offset", input.mask_offset}, {"words", nlohmann::json::array({word})}});
  const auto probs = result.find("probs");
  if (probs == result.end() || !probs->is_array() || probs->size() != 1) {
    throw ProviderFailure("masked_topk: expected one entry in probs");
  }
  return checked_probability(probs->front(), "masked_topk");
}

double RemoteNLI::entail_prob(std::string_view premise, std::string_view hypothesis) const {
  if (premise.empty() || hypothesis.empty()) throw ProviderFailure("entail: empty text");
  const nlohmann::json result = client_->call("entail", {{"premise", premise}, {"hypothesis", hypothesis}});
  const auto prob = result.find("prob");
  if (prob == result.end()) throw ProviderFailure("entail: missing prob");
  return checked_probability(*prob, "entail");
}

std::size_t RemoteEmbedding::dimension() const {
  std::lock_guard lock(mu_);
  return dimension_;
}

std::vector<double> RemoteEmbedding::embed(std::string_view word) const {
  if (word.empty()) throw ProviderFailure("embed: empty word");
  const nlohmann::json result = client_->call("embed", {{"word", word}});
  const auto vec = result.find("vector");
  if (vec == result.end() || !vec->is_array()) throw ProviderFailure("embed: missing vector");
  std::vector<double> out;
  out.reserve(vec->size());
  for (const auto& x : *vec) {
    if (!x.is_number()) throw ProviderFailure("embed: non-numeric component");
    out.push_back(x.get<double>());
  }
  std::lock_guard lock(mu_);
  if (out.empty()) return std::vector<double>(dimension_, 0.0);
  if (dimension_ == 0) dimension_ = out.size();
  if (out.size() != dimension_) throw ProviderFailure("embed: inconsistent vector length");
  return out;
}

}  // namespace lexsimp::remote
