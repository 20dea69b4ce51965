// Copyright 2026 The featcodec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// featcodec command-line front end. Subcommands: synth, analyze, encode,
// decode, evaluate, pack, unpack.
//
// Exit codes: 0 success, 1 internal error, 2 usage, 3 validation, 4 I/O,
// 5 codec.

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "featcodec.hpp"

namespace featcodec::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kUsage = 2, kValidation = 3, kIo = 4, kCodec = 5 };

namespace fs = std::filesystem;

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) return kUsage;
  if (dynamic_cast<const ValidationError*>(&e)) return kValidation;
  if (dynamic_cast<const IoError*>(&e)) return kIo;
  if (dynamic_cast<const CodecError*>(&e)) return kCodec;
  return kInternal;
}

inline FeatureTensor load_input(const fs::path& p) { return load_feature(p, ShapePolicy::Structural); }

inline fs::path output_dir_or(const std::string& dir, const fs::path& fallback) {
  if (dir.empty()) return fallback.empty() ? fs::path(".") : fallback;
  fs::create_directories(dir);
  return dir;
}

inline std::string fmt_double(double v, int precision = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

inline nlohmann::json regions_json(const std::vector<TruncationRegion>& regions) {
  auto j = nlohmann::json::array();
  for (const auto& r : regions) j.push_back({r.lo, r.hi});
  return j;
}

struct Options {
  std::optional<fs::path> config;

  // synth
  std::string synth_task;
  std::string synth_model = "smooth";
  std::uint64_t seed = 0;
  std::uint32_t scale = 1;
  std::string synth_out;

  // analyze
  std::vector<std::string> analyze_inputs;
  int bins = 100;
  std::optional<int> dct_block;
  std::string analyze_out_dir;

  // encode / pack
  std::string input;
  int qp = 32;
  std::string trunc_table;
  std::string codec = "internal";
  bool no_trunc = false;
  bool no_quant = false;
  int bits = 10;
  std::uint32_t pad = kDefaultPadMultiple;
  std::string output;

  // decode
  std::string bitstream;
  std::string ref;

  // evaluate
  std::string records;
  std::vector<std::string> baselines;
  std::string eval_out_dir;

  // unpack
  std::string yuv;
  std::string meta;
};

class App {
 public:
  App(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int synth() {
    auto task = parse_task(o_.synth_task);
    if (!task) throw UsageError("unknown task '" + o_.synth_task + "'");
    auto model = parse_synth_model(o_.synth_model);
    if (!model) throw UsageError("unknown model '" + o_.synth_model + "' (smooth|noise|vstripe)");
    auto t = synth_feature(*task, *model, o_.seed, o_.scale);
    fs::path out = o_.synth_out.empty() ? fs::path(std::string(to_string(*task)) + "_" + o_.synth_model + ".ften")
                                        : fs::path(o_.synth_out);
    save_feature(t, out, ShapePolicy::Structural);
    out_ << out.string() << " " << shape_to_string(t.shape) << "\n";
    return kOk;
  }

  int analyze() {
    if (o_.analyze_inputs.empty()) throw UsageError("analyze: at least one input required");
    if (o_.dct_block && *o_.dct_block < 1) throw UsageError("--dct-block must be positive");
    std::ostringstream summary;
    summary << "file,task,shape,min,max,mean,iv,gm,dc_fraction,first_row_fraction,first_col_fraction\n";
    int status = kOk;
    fs::path summary_dir;
    for (const auto& in : o_.analyze_inputs) {
      try {
        const fs::path path(in);
        auto t = load_input(path);
        auto rep = featcodec::analyze(t, o_.bins, o_.dct_block);
        auto dir = output_dir_or(o_.analyze_out_dir, path.parent_path());
        if (summary_dir.empty()) summary_dir = dir;
        auto j = to_json(rep);
        j["file"] = path.string();
        j["task"] = std::string(to_string(t.task));
        j["shape"] = t.shape;
        const auto report_path = dir / (path.stem().string() + ".stats");
        write_text(report_path, j.dump(2) + "\n");
        summary << path.string() << ',' << to_string(t.task) << ',' << shape_to_string(t.shape) << ','
                << fmt_double(rep.stats.min) << ',' << fmt_double(rep.stats.max) << ',' << fmt_double(rep.stats.mean)
                << ',' << fmt_double(rep.iv) << ',' << fmt_double(rep.gm) << ',';
        if (rep.dct)
          summary << fmt_double(rep.dct->dc_fraction) << ',' << fmt_double(rep.dct->first_row_fraction) << ','
                  << fmt_double(rep.dct->first_col_fraction);
        else
          summary << ",,";
        summary << '\n';
        out_ << report_path.string() << "\n";
      } catch (const Error& e) {
        err_ << "analyze: " << in << ": " << e.what() << "\n";
        if (status == kOk) status = exit_code_for(e);
      }
    }
    if (summary_dir.empty()) summary_dir = output_dir_or(o_.analyze_out_dir, fs::path("."));
    write_text(summary_dir / "analysis_summary.csv", summary.str());
    return status;
  }

  TruncationTable truncation_table(const Config& cfg) const {
    return o_.trunc_table.empty() ? cfg.truncation : load_truncation_table(o_.trunc_table);
  }

  QuantizedTensor preprocess(const FeatureTensor& t, const Config& cfg) const {
    if (o_.no_quant)
      throw UsageError("--no-quant conflicts with this codec: packed planes require integer samples");
    PreprocessOptions p;
    p.truncate = !o_.no_trunc;
    p.bits = o_.bits;
    return preprocess_feature(t, truncation_table(cfg), p);
  }

  nlohmann::json base_manifest(const fs::path& input, const FeatureTensor& t, const QuantizedTensor& q) const {
    nlohmann::json m;
    m["input"] = input.string();
    m["task"] = std::string(to_string(t.task));
    m["shape"] = t.shape;
    m["truncation"] = !o_.no_trunc;
    m["quantization"] = true;
    m["bits"] = q.bits;
    m["regions"] = regions_json(q.regions);
    m["feature_points"] = t.data.size();
    return m;
  }

  int encode() {
    const auto cfg = Config::resolve(o_.config);
    const fs::path input(o_.input);
    const auto t = load_input(input);
    const auto q = preprocess(t, cfg);
    const auto plane = pack(q);
    auto manifest = base_manifest(input, t, q);
    manifest["codec"] = o_.codec;
    manifest["qp"] = o_.qp;

    if (o_.codec == "internal") {
      CodecConfig cc;
      cc.qp = o_.qp;
      cc.bits = o_.bits;
      const auto bs = featcodec::encode(plane, cc);
      fs::path out = o_.output.empty()
                         ? input.parent_path() / (input.stem().string() + ".qp" + std::to_string(o_.qp) + ".fcbs")
                         : fs::path(o_.output);
      write_file(out, bs.bytes);
      manifest["output"] = out.string();
      manifest["total_bits"] = bs.total_bits();
      manifest["bpfp"] = bpfp(bs.total_bits(), t.shape);
      write_text(fs::path(out.string() + ".manifest.json"), manifest.dump(2) + "\n");
      out_ << out.string() << " bpfp=" << fmt_double(manifest["bpfp"].get<double>()) << "\n";
    } else if (o_.codec == "yuv-export") {
      if (o_.bits != 10) throw UsageError("yuv-export requires --bits 10");
      fs::path out = o_.output.empty() ? input.parent_path() / (input.stem().string() + ".yuv") : fs::path(o_.output);
      auto meta = export_yuv400(plane, out, o_.pad, o_.qp);
      write_sidecar(meta, fs::path(out.string() + ".json"));
      // The raw plane carries `bits` bits of payload per feature point; the
      // 16-bit file container is not counted.
      const std::uint64_t raw_bits = std::uint64_t(q.bits) * t.data.size();
      manifest["output"] = out.string();
      manifest["sidecar"] = out.string() + ".json";
      manifest["total_bits"] = raw_bits;
      manifest["bpfp"] = bpfp(raw_bits, t.shape);
      manifest["vtm_flags"] = meta.vtm_flags;
      write_text(fs::path(out.string() + ".manifest.json"), manifest.dump(2) + "\n");
      out_ << out.string() << " bpfp=" << fmt_double(manifest["bpfp"].get<double>()) << "\n";
    } else {
      throw UsageError("unknown codec '" + o_.codec + "' (internal|yuv-export)");
    }
    return kOk;
  }

  int decode() {
    const fs::path in(o_.bitstream);
    const auto bytes = read_file(in);
    const auto plane = featcodec::decode(std::span<const std::uint8_t>(bytes));
    std::optional<FeatureTensor> ref;
    if (!o_.ref.empty()) ref = load_input(o_.ref);
    const auto rec = from_plane(plane);
    std::optional<double> mse;
    if (ref) mse = feature_mse(*ref, rec);
    fs::path out = o_.output.empty() ? in.parent_path() / (in.stem().string() + ".rec.ften") : fs::path(o_.output);
    save_feature(rec, out, ShapePolicy::Structural);
    out_ << out.string();
    if (mse) out_ << " mse=" << std::setprecision(10) << *mse;
    out_ << "\n";
    return kOk;
  }

  std::map<TaskKind, double> baselines(const Config& cfg, std::optional<double>& common) const {
    auto b = cfg.baselines;
    for (const auto& s : o_.baselines) {
      const auto eq = s.find('=');
      try {
        if (eq == std::string::npos) {
          common = std::stod(s);
        } else {
          auto task = parse_task(s.substr(0, eq));
          if (!task) throw UsageError("--baseline: unknown task in '" + s + "'");
          b[*task] = std::stod(s.substr(eq + 1));
        }
      } catch (const std::logic_error&) {
        throw UsageError("--baseline: cannot parse '" + s + "'");
      }
    }
    return b;
  }

  int evaluate() {
    const auto cfg = Config::resolve(o_.config);
    const auto records = records_from_json(parse_json_file(o_.records));
    if (records.empty()) throw ValidationError("records file is empty");
    std::optional<double> common;
    const auto per_task = baselines(cfg, common);
    const auto dir = output_dir_or(o_.eval_out_dir, fs::path("."));

    std::ostringstream summary;
    summary << "task,records,r_squared\n";
    for (const auto& group : group_by_task(records)) {
      const auto task = group.front().task;
      std::optional<double> baseline = common;
      if (auto it = per_task.find(task); it != per_task.end()) baseline = it->second;
      if (!baseline) err_ << "warning: no baseline for " << to_string(task) << "; accuracy drops omitted\n";
      const auto curve = build_curve(group, baseline);
      const auto path = dir / ("curve_" + std::string(to_string(task)) + ".csv");
      write_text(path, curve_csv(curve));
      const auto r2 = curve.mse_accuracy_r2();
      summary << to_string(task) << ',' << curve.records.size() << ',' << (r2 ? fmt_double(*r2) : "") << '\n';
      out_ << to_string(task) << ": " << curve.records.size() << " records";
      if (r2) out_ << ", R2(mse, accuracy)=" << fmt_double(*r2, 4);
      out_ << " -> " << path.string() << "\n";
    }
    write_text(dir / "r2_summary.csv", summary.str());
    return kOk;
  }

  int pack_cmd() {
    const auto cfg = Config::resolve(o_.config);
    if (o_.bits != 10) throw UsageError("pack emits 10-bit YUV 4:0:0 only");
    const fs::path input(o_.input);
    const auto t = load_input(input);
    const auto plane = featcodec::pack(preprocess(t, cfg));
    fs::path out = o_.output.empty() ? input.parent_path() / (input.stem().string() + ".yuv") : fs::path(o_.output);
    auto meta = export_yuv400(plane, out, o_.pad);
    write_sidecar(meta, fs::path(out.string() + ".json"));
    out_ << out.string() << " " << meta.padded_width() << "x" << meta.padded_height() << "\n";
    return kOk;
  }

  int unpack_cmd() {
    const fs::path yuv(o_.yuv);
    const fs::path meta_path = o_.meta.empty() ? fs::path(o_.yuv + ".json") : fs::path(o_.meta);
    const auto meta = read_sidecar(meta_path);
    const auto rec = from_plane(import_yuv400(yuv, meta));
    fs::path out = o_.output.empty() ? yuv.parent_path() / (yuv.stem().string() + ".rec.ften") : fs::path(o_.output);
    save_feature(rec, out, ShapePolicy::Structural);
    out_ << out.string() << " " << shape_to_string(rec.shape) << "\n";
    return kOk;
  }

  int run(int argc, const char* const* argv) {
    CLI::App app{"featcodec: feature coding toolkit"};
    app.require_subcommand(1);
    std::string config;
    app.add_option("--config", config, "JSON config (default: $FEATCODEC_CONFIG)");

    auto* synth = app.add_subcommand("synth", "generate a deterministic synthetic feature");
    synth->add_option("task", o_.synth_task, "cls|seg|dpt|csr|tti")->required();
    synth->add_option("--model", o_.synth_model, "smooth|noise|vstripe");
    synth->add_option("--seed", o_.seed);
    synth->add_option("--scale", o_.scale, "divide spatial extents by this factor")->check(CLI::PositiveNumber);
    synth->add_option("-o,--output", o_.synth_out);

    auto* analyze = app.add_subcommand("analyze", "statistics report per feature file");
    analyze->add_option("inputs", o_.analyze_inputs, "FTEN files");
    analyze->add_option("--bins", o_.bins)->check(CLI::Range(2, 1 << 20));
    analyze->add_option("--dct-block", o_.dct_block);
    analyze->add_option("--out-dir", o_.analyze_out_dir);

    auto add_preprocess = [this](CLI::App* c) {
      c->add_option("input", o_.input, "FTEN file")->required();
      c->add_option("--trunc-table", o_.trunc_table, "JSON truncation table");
      c->add_flag("--no-trunc", o_.no_trunc, "quantize over the empirical range (quantization only)");
      c->add_flag("--no-quant", o_.no_quant, "truncation only; rejected, packed planes need integer samples");
      c->add_option("--bits", o_.bits)->check(CLI::Range(8, 16));
      c->add_option("--pad", o_.pad, "YUV pad multiple")->check(CLI::Range(1, 1024));
      c->add_option("-o,--output", o_.output);
    };
    auto* encode = app.add_subcommand("encode", "truncate, quantize, pack and encode");
    add_preprocess(encode);
    encode->add_option("--qp", o_.qp)->check(CLI::Range(0, 51));
    encode->add_option("--codec", o_.codec, "internal|yuv-export");

    auto* decode = app.add_subcommand("decode", "decode an FCBS bitstream to FTEN");
    decode->add_option("bitstream", o_.bitstream)->required();
    decode->add_option("-o,--output", o_.output);
    decode->add_option("--ref", o_.ref, "reference FTEN for MSE");

    auto* evaluate = app.add_subcommand("evaluate", "rate-accuracy curves and MSE/accuracy R2");
    evaluate->add_option("records", o_.records, "JSON records file")->required();
    evaluate->add_option("--baseline", o_.baselines, "VALUE or task=VALUE");
    evaluate->add_option("--out-dir", o_.eval_out_dir);

    auto* pack = app.add_subcommand("pack", "export the packed 10-bit plane as YUV 4:0:0 + sidecar");
    add_preprocess(pack);

    auto* unpack = app.add_subcommand("unpack", "rebuild an FTEN feature from a YUV plane + sidecar");
    unpack->add_option("yuv", o_.yuv)->required();
    unpack->add_option("--meta", o_.meta, "sidecar (default: <yuv>.json)");
    unpack->add_option("-o,--output", o_.output);

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      out_ << app.help();
      return kOk;
    } catch (const CLI::ParseError& e) {
      err_ << e.what() << "\n";
      return kUsage;
    }
    if (!config.empty()) o_.config = config;

    try {
      if (*synth) return this->synth();
      if (*analyze) return this->analyze();
      if (*encode) return this->encode();
      if (*decode) return this->decode();
      if (*evaluate) return this->evaluate();
      if (*pack) return pack_cmd();
      if (*unpack) return unpack_cmd();
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return exit_code_for(e);
    }
    return kUsage;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  Options o_;
};

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<const char*> argv;
  argv.push_back("featcodec");
  for (const auto& a : args) argv.push_back(a.c_str());
  return App(out, err).run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace featcodec::cli
