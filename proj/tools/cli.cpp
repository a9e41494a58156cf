#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "permx/analysis.hpp"
#include "permx/codecs.hpp"
#include "permx/entropy.hpp"
#include "permx/error.hpp"
#include "permx/fileio.hpp"
#include "permx/keyfile.hpp"
#include "permx/permutation.hpp"
#include "permx/transform.hpp"

namespace permx::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kIoBlock = 1 << 20;

enum class Format { bytes, image, audio };

struct SourceOptions {
  std::string entropy_file;
  bool cycle = false;
  bool system = false;
  std::string seed;
};

struct TransformOptions {
  std::size_t size = 256;
  std::size_t count = 16;
  std::string tail = "identity";
  std::string shuffle = "unbiased";
};

struct Options {
  SourceOptions source;
  TransformOptions transform;
  std::string format = "bytes";
  std::string input;
  std::string output;
  std::string key;
  std::string set;
  std::string report;
  bool json = false;
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> counts;
  unsigned repeat = 1;
};

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::config, what);
}

std::unique_ptr<EntropySource> make_source(const SourceOptions& o) {
  const int chosen = (o.entropy_file.empty() ? 0 : 1) + (o.system ? 1 : 0) +
                     (o.seed.empty() ? 0 : 1);
  if (chosen > 1)
    config_error("choose one of --entropy-file, --system and --seed");
  if (o.cycle && o.entropy_file.empty())
    config_error("--cycle only applies to --entropy-file");
  if (!o.seed.empty())
    return std::make_unique<SeededEntropySource>(
        SeededEntropySource::from_hex(o.seed));
  if (!o.entropy_file.empty())
    return std::make_unique<FileEntropySource>(o.entropy_file, o.cycle);
  return std::make_unique<SystemEntropySource>();
}

ShuffleMode parse_shuffle(const std::string& name) {
  if (name == "unbiased") return ShuffleMode::unbiased;
  if (name == "full-range") return ShuffleMode::full_range;
  config_error("unknown shuffle mode '" + name + "'");
}

Format parse_format(const std::string& name) {
  if (name == "bytes") return Format::bytes;
  if (name == "image") return Format::image;
  if (name == "audio") return Format::audio;
  config_error("unknown format '" + name + "'");
}

void check_geometry(std::size_t n, std::size_t m) {
  if (!is_power_of_two(n) || n < 8)
    config_error("--size must be a power of two >= 8, got " + std::to_string(n));
  if (!is_power_of_two(m))
    config_error("--count must be a power of two, got " + std::to_string(m));
  if (n > (std::size_t{1} << 31) || m > (std::size_t{1} << 31))
    config_error("--size and --count are limited to 2^31");
}

bool same_file(const fs::path& a, const fs::path& b) {
  std::error_code ec;
  if (fs::exists(a, ec) && fs::exists(b, ec)) return fs::equivalent(a, b, ec);
  return fs::weakly_canonical(a, ec) == fs::weakly_canonical(b, ec);
}

void require_distinct(const std::vector<std::string>& paths) {
  for (std::size_t i = 0; i < paths.size(); ++i)
    for (std::size_t j = i + 1; j < paths.size(); ++j)
      if (!paths[i].empty() && !paths[j].empty() && same_file(paths[i], paths[j]))
        config_error("paths must be distinct: " + paths[i] + " and " + paths[j]);
}

fs::path channel_key_path(const std::string& key, std::size_t channel) {
  if (channel == 0) return key;
  return key + ".ch" + std::to_string(channel);
}

// A decoded input file reduced to the bit streams the transform operates on.
struct Media {
  Format format = Format::bytes;
  std::vector<std::uint8_t> raw;
  PnmFile pnm;
  WavFile wav;

  std::vector<BitStream> streams() const {
    switch (format) {
      case Format::bytes:
        return {bytes_to_bits(raw)};
      case Format::image:
        return {image_to_bits(pnm.image)};
      case Format::audio: {
        auto bits = audio_to_bits(wav.audio);
        if (wav.audio.channels == 1) return {std::move(bits.left)};
        return {std::move(bits.left), std::move(bits.right)};
      }
    }
    return {};
  }

  std::vector<std::uint8_t> rebuild(const std::vector<BitStream>& s) const {
    switch (format) {
      case Format::bytes:
        return bits_to_bytes(s.at(0));
      case Format::image: {
        PnmFile f = pnm;
        const auto& img = pnm.image;
        f.image = bits_to_image(s.at(0), img.width, img.height, img.channels);
        return serialize(f);
      }
      case Format::audio: {
        WavFile f = wav;
        AudioBits bits{s.at(0), s.size() > 1 ? s[1] : BitStream{}};
        f.audio = bits_to_audio(bits, wav.audio.sample_rate, wav.audio.channels);
        return serialize(f);
      }
    }
    return {};
  }
};

Media load_media(const std::string& path, Format format) {
  Media m;
  m.format = format;
  auto bytes = read_file(path);
  switch (format) {
    case Format::bytes:
      m.raw = std::move(bytes);
      break;
    case Format::image:
      m.pnm = parse_pnm(bytes);
      break;
    case Format::audio:
      m.wav = parse_wav(bytes);
      break;
  }
  return m;
}

RandomnessReport analyze_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  EntAccumulator acc;
  std::vector<std::uint8_t> buf(kIoBlock);
  while (in) {
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    acc.add(std::span(buf.data(), static_cast<std::size_t>(in.gcount())));
  }
  if (in.bad()) throw Error(ErrorKind::io, "read error on " + path);
  return acc.report();
}

json report_json(const RandomnessReport& r) { return json::parse(format_json(r)); }

json comparison_json(const Comparison& c) {
  json j = json::object();
  for (const auto& m : c.metrics)
    j[m.name] = m.percent ? json(*m.percent) : json(nullptr);
  return j;
}

void emit(const std::string& text, const std::string& path) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                    text.size()));
}

struct RunAccounting {
  std::uint64_t set_bits = 0;
  std::uint64_t total_bits = 0;
  std::uint64_t chunks = 0;
};

void write_expand_report(const Options& o, const RandomnessReport& before,
                         const RandomnessReport& after, const RunAccounting& acct,
                         std::ostream& out) {
  const Comparison cmp = compare(before, after);
  if (o.json) {
    json j;
    j["before"] = report_json(before);
    j["after"] = report_json(after);
    j["percent_change"] = comparison_json(cmp);
    j["entropy_bits_consumed"] = acct.total_bits;
    j["set_generation_bits"] = acct.set_bits;
    j["chunks"] = acct.chunks;
    const std::string text = j.dump(2) + "\n";
    out << text;
    if (!o.report.empty()) emit(text, o.report);
    return;
  }
  out << format_table(cmp);
  out << "entropy bits consumed: " << acct.total_bits << " (set generation "
      << acct.set_bits << ", " << acct.chunks << " chunks)\n";
  if (!o.report.empty()) {
    std::string kv = format_key_values(before, "before.") +
                     format_key_values(after, "after.");
    kv += "entropy_bits_consumed=" + std::to_string(acct.total_bits) + "\n";
    kv += "set_generation_bits=" + std::to_string(acct.set_bits) + "\n";
    kv += "chunks=" + std::to_string(acct.chunks) + "\n";
    emit(kv, o.report);
  }
}

int cmd_keygen(const Options& o, std::ostream& out) {
  if (o.key.empty()) config_error("--key is required");
  check_geometry(o.transform.size, o.transform.count);
  auto source = make_source(o.source);
  KeyTrace trace{generate_set(o.transform.size, o.transform.count, *source,
                              parse_shuffle(o.transform.shuffle)),
                 {}, TailPolicy::identity_pass, 0};
  save_key(trace, o.key);
  out << "wrote " << o.key << ": " << trace.set.count() << " maps of size "
      << trace.set.block_size() << ", " << source->position()
      << " entropy bits consumed\n";
  return kOk;
}

PermutationSet obtain_set(const Options& o, EntropySource& source) {
  if (!o.set.empty()) return load_key(o.set).set;
  check_geometry(o.transform.size, o.transform.count);
  return generate_set(o.transform.size, o.transform.count, source,
                      parse_shuffle(o.transform.shuffle));
}

int cmd_expand(const Options& o, std::ostream& out) {
  if (o.input.empty() || o.output.empty() || o.key.empty())
    config_error("expand needs --input, --output and --key");
  require_distinct({o.input, o.output, o.key, o.report, o.set});
  const Format format = parse_format(o.format);
  const TailPolicy tail = parse_tail_policy(o.transform.tail);
  if (format != Format::bytes && tail != TailPolicy::identity_pass)
    config_error("image and audio formats require --tail identity");

  auto source = make_source(o.source);
  PermutationSet set = obtain_set(o, *source);
  if (set.block_size() < 8) config_error("block size must be at least 8");
  RunAccounting acct;
  acct.set_bits = source->position();

  RandomnessReport before, after;
  if (format == Format::bytes) {
    std::ifstream in(o.input, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open " + o.input);
    AtomicFileWriter writer(o.output);
    StreamExpander expander(std::move(set), *source, tail);
    EntAccumulator acc_in, acc_out;
    std::vector<std::uint8_t> buf(kIoBlock), produced;
    while (in) {
      in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
      const std::span chunk(buf.data(), static_cast<std::size_t>(in.gcount()));
      acc_in.add(chunk);
      produced.clear();
      expander.feed(chunk, produced);
      acc_out.add(produced);
      writer.write(produced);
    }
    if (in.bad()) throw Error(ErrorKind::io, "read error on " + o.input);
    produced.clear();
    expander.finish(produced);
    acc_out.add(produced);
    writer.write(produced);
    const KeyTrace trace = expander.take_trace();
    acct.chunks = trace.selections.size();
    AtomicFileWriter key_writer(o.key);
    key_writer.write(encode_key(trace));
    writer.commit();
    key_writer.commit();
    before = acc_in.report();
    after = acc_out.report();
  } else {
    const Media media = load_media(o.input, format);
    std::vector<BitStream> streams = media.streams();
    std::vector<KeyTrace> traces;
    for (auto& s : streams) {
      auto r = expand(s, set, *source, tail);
      acct.chunks += r.trace.selections.size();
      s = std::move(r.output);
      traces.push_back(std::move(r.trace));
    }
    const auto bytes = media.rebuild(streams);
    write_file_atomic(o.output, bytes);
    for (std::size_t c = 0; c < traces.size(); ++c)
      save_key(traces[c], channel_key_path(o.key, c));
    before = analyze(read_file(o.input));
    after = analyze(bytes);
  }
  acct.total_bits = source->position();
  write_expand_report(o, before, after, acct, out);
  return kOk;
}

int cmd_invert(const Options& o, std::ostream& out) {
  if (o.input.empty() || o.output.empty() || o.key.empty())
    config_error("invert needs --input, --output and --key");
  require_distinct({o.input, o.output, o.key});
  const Format format = parse_format(o.format);

  if (format == Format::bytes) {
    StreamInverter inverter(load_key(o.key));
    std::ifstream in(o.input, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open " + o.input);
    AtomicFileWriter writer(o.output);
    std::vector<std::uint8_t> buf(kIoBlock), produced;
    while (in) {
      in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
      produced.clear();
      inverter.feed(std::span(buf.data(), static_cast<std::size_t>(in.gcount())),
                    produced);
      writer.write(produced);
    }
    if (in.bad()) throw Error(ErrorKind::io, "read error on " + o.input);
    produced.clear();
    inverter.finish(produced);
    writer.write(produced);
    writer.commit();
  } else {
    const Media media = load_media(o.input, format);
    std::vector<BitStream> streams = media.streams();
    for (std::size_t c = 0; c < streams.size(); ++c)
      streams[c] = invert(streams[c], load_key(channel_key_path(o.key, c)));
    write_file_atomic(o.output, media.rebuild(streams));
  }
  if (!o.json) out << "wrote " << o.output << "\n";
  return kOk;
}

int cmd_analyze(const Options& o, std::ostream& out) {
  if (o.input.empty()) config_error("analyze needs an input file");
  const RandomnessReport r = analyze_file(o.input);
  const std::string text = o.json ? format_json(r) + "\n" : format_table(r);
  out << text;
  if (!o.report.empty())
    emit(o.json ? text : format_key_values(r), o.report);
  return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  if (o.input.empty()) config_error("sweep needs an input file");
  if (o.repeat == 0) config_error("--repeat must be at least 1");
  const Format format = parse_format(o.format);
  const TailPolicy tail = parse_tail_policy(o.transform.tail);
  if (format != Format::bytes && tail != TailPolicy::identity_pass)
    config_error("image and audio formats require --tail identity");
  const auto sizes = o.sizes.empty() ? std::vector{o.transform.size} : o.sizes;
  const auto counts = o.counts.empty() ? std::vector{o.transform.count} : o.counts;
  for (auto n : sizes)
    for (auto m : counts) check_geometry(n, m);

  auto source = make_source(o.source);
  const ShuffleMode mode = parse_shuffle(o.transform.shuffle);
  const Media media = load_media(o.input, format);
  const auto original = media.streams();
  const auto input_report = analyze(media.rebuild(original));

  json rows = json::array();
  std::string table = "# input entropy " + std::to_string(input_report.entropy) + "\n";
  table += "size\tcount\tpass\tentropy\tchi_square\n";
  for (auto n : sizes) {
    for (auto m : counts) {
      const PermutationSet set = generate_set(n, m, *source, mode);
      auto streams = original;
      for (unsigned pass = 1; pass <= o.repeat; ++pass) {
        for (auto& s : streams) s = expand(s, set, *source, tail).output;
        const auto r = analyze(media.rebuild(streams));
        char line[160];
        std::snprintf(line, sizeof line, "%zu\t%zu\t%u\t%.6f\t%.2f\n", n, m,
                      pass, r.entropy, r.chi_square);
        table += line;
        rows.push_back(json{{"size", n}, {"count", m}, {"pass", pass},
                            {"entropy", r.entropy}, {"chi_square", r.chi_square}});
      }
    }
  }
  std::string text = table;
  if (o.json) {
    json j;
    j["input_entropy"] = input_report.entropy;
    j["rows"] = rows;
    text = j.dump(2) + "\n";
  }
  out << text;
  if (!o.report.empty()) emit(text, o.report);
  return kOk;
}

void add_source_options(CLI::App* cmd, SourceOptions& s) {
  cmd->add_option("--entropy-file", s.entropy_file,
                  "Raw binary entropy (e.g. a QRNG capture)");
  cmd->add_flag("--cycle", s.cycle,
                "Reuse the entropy file from the start when exhausted (insecure)");
  cmd->add_flag("--system", s.system, "Use operating-system randomness (default)");
  cmd->add_option("--seed", s.seed, "Deterministic seeded source, hex");
}

void add_transform_options(CLI::App* cmd, TransformOptions& t) {
  cmd->add_option("--size", t.size, "Block size N in bits (power of two >= 8)")
      ->capture_default_str();
  cmd->add_option("--count", t.count, "Number of maps m (power of two)")
      ->capture_default_str();
  cmd->add_option("--tail", t.tail, "Final partial chunk: identity, drop or pad")
      ->capture_default_str();
  cmd->add_option("--shuffle", t.shuffle, "Map generation: unbiased or full-range")
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bit-block permutation entropy expansion"};
  app.name("permx");
  app.require_subcommand(1);
  Options o;

  auto* keygen = app.add_subcommand("keygen", "Generate a permutation set");
  add_transform_options(keygen, o.transform);
  add_source_options(keygen, o.source);
  keygen->add_option("--key", o.key, "Key file to write")->required();

  auto* expand_cmd = app.add_subcommand("expand", "Transform a file");
  expand_cmd->add_option("-i,--input", o.input)->required();
  expand_cmd->add_option("-o,--output", o.output)->required();
  expand_cmd->add_option("--key", o.key, "Key file to write")->required();
  expand_cmd->add_option("--set", o.set, "Reuse the maps of an existing key file");
  expand_cmd->add_option("--format", o.format, "bytes, image or audio")
      ->capture_default_str();
  expand_cmd->add_option("--report", o.report, "Write the before/after report");
  expand_cmd->add_flag("--json", o.json, "Structured output");
  add_transform_options(expand_cmd, o.transform);
  add_source_options(expand_cmd, o.source);

  auto* invert_cmd = app.add_subcommand("invert", "Undo a transform");
  invert_cmd->add_option("-i,--input", o.input)->required();
  invert_cmd->add_option("-o,--output", o.output)->required();
  invert_cmd->add_option("--key", o.key, "Key file written by expand")->required();
  invert_cmd->add_option("--format", o.format, "bytes, image or audio")
      ->capture_default_str();

  auto* analyze_cmd = app.add_subcommand("analyze", "Randomness report for a file");
  analyze_cmd->add_option("-i,--input,input", o.input)->required();
  analyze_cmd->add_option("--report", o.report, "Also write the report here");
  analyze_cmd->add_flag("--json", o.json, "Structured output");

  auto* sweep = app.add_subcommand("sweep", "Entropy over a size/count grid");
  sweep->add_option("-i,--input,input", o.input)->required();
  sweep->add_option("--sizes", o.sizes, "Comma-separated block sizes")
      ->delimiter(',');
  sweep->add_option("--counts", o.counts, "Comma-separated map counts")
      ->delimiter(',');
  sweep->add_option("--repeat", o.repeat, "Passes per grid point")
      ->capture_default_str();
  sweep->add_option("--format", o.format, "bytes, image or audio")
      ->capture_default_str();
  sweep->add_option("--report", o.report, "Also write the table here");
  sweep->add_flag("--json", o.json, "Structured output");
  add_transform_options(sweep, o.transform);
  add_source_options(sweep, o.source);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "permx: error[config]: " << e.what() << "\n";
    return kConfig;
  }

  try {
    if (keygen->parsed()) return cmd_keygen(o, out);
    if (expand_cmd->parsed()) return cmd_expand(o, out);
    if (invert_cmd->parsed()) return cmd_invert(o, out);
    if (analyze_cmd->parsed()) return cmd_analyze(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
  } catch (const Error& e) {
    err << "permx: error[" << to_string(e.kind()) << "]: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::io:
        return kIo;
      case ErrorKind::entropy_exhausted:
        return kEntropyExhausted;
      case ErrorKind::format:
        return kFormat;
      case ErrorKind::config:
        return kConfig;
      case ErrorKind::contract:
        return kInternal;
    }
  } catch (const std::exception& e) {
    err << "permx: error[internal]: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}

}  // namespace permx::cli
