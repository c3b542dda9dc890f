#include "daat/model_io.h"

#include <bit>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include "daat/errors.h"

namespace daat::model_io {

namespace {

template <typename U>
void put(std::string& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::string_view b) : bytes_(b) {}

  template <typename U>
  U get(const char* what) {
    need(sizeof(U), what);
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
      v |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += sizeof(U);
    return v;
  }

  std::string_view take(std::size_t n, const char* what) {
    need(n, what);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::string_view line(const char* what) {
    const auto nl = bytes_.find('\n', pos_);
    if (nl == std::string_view::npos) throw FormatError(std::string("model: unterminated ") + what);
    auto s = bytes_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) throw FormatError(std::string("model: truncated ") + what);
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

const std::string& Container::get(const std::string& key) const {
  for (const auto& [k, v] : hyper)
    if (k == key) return v;
  throw FormatError("model: missing hyperparameter '" + key + "'");
}

const nn::Tensor& Container::tensor(const std::string& name) const {
  for (const auto& [n, t] : tensors)
    if (n == name) return t;
  throw FormatError("model: missing tensor '" + name + "'");
}

std::string serialize(const Container& c) {
  std::string out(kMagic);
  out += '\n';
  for (const auto& [k, v] : c.hyper) {
    if (k.empty() || k.find_first_of("=\n") != std::string::npos ||
        v.find('\n') != std::string::npos) {
      throw InvalidInput("model: unrepresentable hyperparameter '" + k + "'");
    }
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  out += '\n';
  put<std::uint64_t>(out, c.tensors.size());
  for (const auto& [name, t] : c.tensors) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) put<std::uint64_t>(out, d);
    for (double v : t.values()) put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  return out;
}

Container deserialize(std::string_view bytes) {
  Reader r(bytes);
  if (r.line("magic") != kMagic) throw FormatError("model: bad magic");
  Container c;
  for (;;) {
    auto l = r.line("hyperparameter block");
    if (l.empty()) break;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw FormatError("model: malformed hyperparameter line '" + std::string(l) + "'");
    c.hyper.emplace_back(std::string(l.substr(0, eq)), std::string(l.substr(eq + 1)));
  }
  const auto count = r.get<std::uint64_t>("tensor count");
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto name_len = r.get<std::uint32_t>("tensor name");
    std::string name(r.take(name_len, "tensor name"));
    const auto rank = r.get<std::uint32_t>("tensor rank");
    nn::Shape shape;
    std::uint64_t n = rank == 0 ? 0 : 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      shape.push_back(r.get<std::uint64_t>("tensor dims"));
      n *= shape.back();
    }
    if (n > r.remaining() / 8) throw FormatError("model: truncated values of '" + name + "'");
    std::vector<double> values(n);
    for (auto& v : values) v = std::bit_cast<double>(r.get<std::uint64_t>("tensor values"));
    c.tensors.emplace_back(std::move(name), nn::Tensor(std::move(shape), std::move(values)));
  }
  if (!r.done()) throw FormatError("model: trailing bytes after last tensor");
  return c;
}

void save(const std::filesystem::path& path, const Container& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::string bytes = serialize(c);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

Container load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

void restore(nn::ParameterStore& store, const Container& c) {
  if (c.tensors.size() != store.size()) {
    throw FormatError("model: " + std::to_string(c.tensors.size()) + " tensors, model has " +
                      std::to_string(store.size()) + " parameters");
  }
  std::set<std::string> seen;
  for (const auto& [name, t] : c.tensors) {
    nn::Parameter* p = store.find(name);
    if (!p) throw FormatError("model: unexpected tensor '" + name + "'");
    if (!seen.insert(name).second) throw FormatError("model: duplicate tensor '" + name + "'");
    if (p->value.shape() != t.shape()) {
      throw FormatError("model: tensor '" + name + "' has shape " + nn::shape_string(t.shape()) +
                        ", expected " + nn::shape_string(p->value.shape()));
    }
    p->value = t;
  }
}

void append_parameters(Container& c, const nn::ParameterStore& store) {
  for (const auto& p : store) c.tensors.emplace_back(p->name, p->value);
}

}  // namespace daat::model_io
