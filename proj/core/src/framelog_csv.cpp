#include "vidmeter/framelog_csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "vidmeter/error.hpp"

namespace vidmeter {

namespace {

constexpr const char* kFrameLogHeader = "index,pts_seconds,size_bytes,is_key";
constexpr const char* kTraceHeader = "t_seconds,kbps";

std::string shortest_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, end);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    std::string line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

double parse_double(const std::string& cell, std::int64_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    raise(Errc::parse_error, "non-numeric cell '" + cell + "' on line " +
                                 std::to_string(line_no),
          line_no);
  }
  return value;
}

std::uint64_t parse_u64(const std::string& cell, std::int64_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    raise(Errc::parse_error, "non-numeric cell '" + cell + "' on line " +
                                 std::to_string(line_no),
          line_no);
  }
  return value;
}

struct MetaLines {
  std::vector<std::pair<std::string, std::string>> entries;
  std::size_t first_data_line = 0;  // index of the header line
};

MetaLines parse_meta(const std::vector<std::string>& lines) {
  MetaLines meta;
  std::size_t i = 0;
  for (; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] != '#') break;
    std::string body = line.substr(1);
    if (!body.empty() && body[0] == ' ') body.erase(0, 1);
    std::size_t eq = body.find('=');
    if (eq != std::string::npos) {
      meta.entries.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    }
  }
  meta.first_data_line = i;
  return meta;
}

}  // namespace

std::string format_seconds(double value) {
  std::string s = shortest_double(value);
  if (s.find('e') != std::string::npos || s.find("inf") != std::string::npos ||
      s.find("nan") != std::string::npos) {
    return s;
  }
  std::size_t dot = s.find('.');
  if (dot == std::string::npos) {
    s += ".000000";
  } else {
    std::size_t decimals = s.size() - dot - 1;
    if (decimals < 6) s.append(6 - decimals, '0');
  }
  return s;
}

std::string write_framelog_csv(const FrameLog& log) {
  std::ostringstream out;
  out << "# video_id=" << log.video_id << "\n";
  if (log.itag) out << "# itag=" << log.itag->code << "\n";
  if (log.declared_duration) {
    out << "# declared_duration=" << format_seconds(*log.declared_duration)
        << "\n";
  }
  out << kFrameLogHeader << "\n";
  for (std::size_t i = 0; i < log.frames.size(); ++i) {
    const Frame& f = log.frames[i];
    out << i << ',' << format_seconds(f.pts) << ',' << f.size << ',';
    if (f.is_key) out << (*f.is_key ? '1' : '0');
    out << "\n";
  }
  return out.str();
}

FrameLog read_framelog_csv(const std::string& text) {
  const auto lines = split_lines(text);
  const auto meta = parse_meta(lines);

  FrameLog log;
  for (const auto& [key, value] : meta.entries) {
    if (key == "video_id") {
      log.video_id = value;
    } else if (key == "itag") {
      int code = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), code);
      if (ec != std::errc{} || ptr != value.data() + value.size()) {
        raise(Errc::parse_error, "bad itag metadata '" + value + "'");
      }
      auto known = find_itag(code);
      log.itag = known ? *known : ItagDescriptor{code, Resolution{0}, Container::mp4, false};
    } else if (key == "declared_duration") {
      log.declared_duration = parse_double(value, static_cast<std::int64_t>(meta.first_data_line));
    }
  }

  if (meta.first_data_line >= lines.size() ||
      lines[meta.first_data_line] != kFrameLogHeader) {
    raise(Errc::schema_error,
          "expected header '" + std::string(kFrameLogHeader) + "'");
  }

  for (std::size_t i = meta.first_data_line + 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    const auto line_no = static_cast<std::int64_t>(i + 1);
    auto cells = split_csv(line);
    if (cells.size() != 3 && cells.size() != 4) {
      raise(Errc::parse_error,
            "expected 3 or 4 cells on line " + std::to_string(line_no), line_no);
    }
    parse_u64(cells[0], line_no);  // index column; value itself is redundant
    Frame f;
    f.pts = parse_double(cells[1], line_no);
    f.size = parse_u64(cells[2], line_no);
    if (cells.size() == 4 && !cells[3].empty()) {
      if (cells[3] == "1") {
        f.is_key = true;
      } else if (cells[3] == "0") {
        f.is_key = false;
      } else {
        raise(Errc::parse_error, "bad is_key cell '" + cells[3] + "' on line " +
                                     std::to_string(line_no),
              line_no);
      }
    }
    log.frames.push_back(f);
  }

  if (log.frames.empty()) raise(Errc::empty_log, "no data rows");
  log.validate();
  return log;
}

std::string write_trace_csv(const BitrateTrace& trace) {
  std::ostringstream out;
  out << "# interval=" << format_seconds(trace.interval) << "\n";
  out << "# source_duration=" << format_seconds(trace.source_duration) << "\n";
  out << kTraceHeader << "\n";
  for (std::size_t i = 0; i < trace.values.size(); ++i) {
    out << format_seconds(static_cast<double>(i) * trace.interval) << ','
        << shortest_double(trace.values[i]) << "\n";
  }
  return out.str();
}

BitrateTrace read_trace_csv(const std::string& text) {
  const auto lines = split_lines(text);
  const auto meta = parse_meta(lines);

  BitrateTrace trace;
  bool have_duration = false;
  for (const auto& [key, value] : meta.entries) {
    if (key == "interval") {
      trace.interval = parse_double(value, 1);
    } else if (key == "source_duration") {
      trace.source_duration = parse_double(value, 1);
      have_duration = true;
    }
  }
  if (meta.first_data_line >= lines.size() ||
      lines[meta.first_data_line] != kTraceHeader) {
    raise(Errc::schema_error,
          "expected header '" + std::string(kTraceHeader) + "'");
  }
  for (std::size_t i = meta.first_data_line + 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    const auto line_no = static_cast<std::int64_t>(i + 1);
    auto cells = split_csv(line);
    if (cells.size() != 2) {
      raise(Errc::parse_error,
            "expected 2 cells on line " + std::to_string(line_no), line_no);
    }
    parse_double(cells[0], line_no);
    double v = parse_double(cells[1], line_no);
    if (v < 0.0) {
      raise(Errc::parse_error,
            "negative bitrate on line " + std::to_string(line_no), line_no);
    }
    trace.values.push_back(v);
  }
  if (trace.values.empty()) raise(Errc::empty_trace, "no data rows");
  if (!have_duration) {
    trace.source_duration =
        trace.interval * static_cast<double>(trace.values.size());
  }
  return trace;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::not_found, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::not_found, "cannot write " + path.string());
  out << data;
}

}  // namespace vidmeter
