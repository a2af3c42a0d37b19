#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wz/breuil.hpp"
#include "wz/ring.hpp"
#include "wz/witt.hpp"
#include "wz/zink_frames.hpp"

namespace wz::cli {

// ---------------------------------------------------------------------------
// Descriptor grammar
//
//   desc := Zmod(N) | Zmod(p^n) | Fp(p) | Fq(p, n [, var]) | Fq(p, poly [, var])
//         | Series(desc, var, n) | Ext(desc, var, poly [, k])
//
// Errors carry the byte offset into the text.
DescPtr parse_descriptor(const std::string& text);

// Witt vector: "W[p=2,N=3; 1,0,1]@Zmod(2^3)" or a bare coordinate list
// "1,0,t" over R.
WittVector parse_witt(const std::string& text, const RingPtr& R);

// Element of W(R) in the Zink frame: integers, p, v (for v(1) in the Witt
// frame, or the v of the Zink ring), and variables of R, each read as its
// Teichmueller lift (m-part when in m, W(k)-part when a Teichmueller
// representative of k).
ZinkElement parse_zink_entry(const std::string& text, const ZinkPtr& Z);

// ---------------------------------------------------------------------------
// Window spec files: "key = value" lines, '#' comments.
//
//   frame = zink | witt
//   ring = Series(Fp(2),t,2)
//   support = 2        # zink
//   N = 2              # witt
//   h = 2
//   d = 1
//   psi = 1, 0; v, 1   # rows separated by ';', L-rows first
struct WindowSpec {
  std::string frame = "zink";
  DescPtr ring;
  int support = 4;
  int N = 3;
  int h = 0, d = 0;
  std::vector<std::vector<std::string>> psi;
};
WindowSpec parse_window_spec(const std::string& text);
WindowSpec read_window_spec(const std::string& path);
std::shared_ptr<const ZinkFrame> build_frame(const WindowSpec& s);
Window<ZinkElement> build_window(const WindowSpec& s);

// Breuil window files:
//   k = Fp(3)
//   N = 3
//   M = 3
//   sigma = t^p
//   E = p - t
//   h = 1
//   d = 1
//   phi = ...; psi = ...  (matrices in the t, p grammar)
struct BreuilSpec {
  DescPtr k;
  int N = 3, M = 3;
  std::string sigma = "t^p", E = "p-t";
  int h = 0, d = 0;
  std::vector<std::vector<std::string>> phi, psi;
};
BreuilSpec parse_breuil_spec(const std::string& text);

// ---------------------------------------------------------------------------
// Reports

enum class Format { Lines, Human };

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}
  void add(const std::string& key, const std::string& value) { items_.emplace_back(key, value); }
  void add(const std::string& key, long long value) { add(key, std::to_string(value)); }
  void add_bool(const std::string& key, bool value) { add(key, value ? "yes" : "no"); }
  // Marks a failed verification; status becomes 1.
  void fail(const std::string& what) {
    failed_ = true;
    add("counterexample", what);
  }
  bool failed() const { return failed_; }
  std::string render(Format f) const;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> items_;
  bool failed_ = false;
};

// Runs the command line; returns the exit status (0 ok, 1 violation,
// 2 precision or support exhausted, 3 usage).
int run(int argc, char** argv);

}  // namespace wz::cli
