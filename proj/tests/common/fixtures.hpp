#ifndef FLOWDEP_TEST_FIXTURES_HPP
#define FLOWDEP_TEST_FIXTURES_HPP

#include <cstdint>
#include <vector>

namespace fixtures {

// 10 connections, 26 packets, deliberately interleaved. k03 is a single
// packet and k04 has two packets at one timestamp; both must be dropped.
// All surviving durations are exact binary fractions.
inline const char* kTenConnPackets =
    "# ten-connection fixture\n"
    "k05,100.0,A,1460,8080\n"
    "k01,10.0,A,1000,80\n"
    "k02,5.0,A,100,22\n"
    "k09,20.0,A,100,80\n"
    "k07,0.5,A,250,80\n"
    "k03,7.0,A,40,80\n"
    "k10,3.25,B,4000,700\n"
    "k05,100.1,A,1460,8080\n"
    "k04,8.0,A,10,443\n"
    "k02,5.5,A,200,22\n"
    "k08,1000000.125,A,123,12345\n"
    "k06,50.0,B,999,8443\n"
    "k09,20.2,A,100,80\n"
    "k07,0.75,B,250,8080\n"
    "k05,100.2,B,100,8080\n"
    "k01,12.5,B,500,80\n"
    "k04,8.0,B,20,443\n"
    "k09,20.4,A,100,80\n"
    "k02,6.0,B,300,22\n"
    "k10,4.5,A,2000,700\n"
    "k09,20.6,A,100,80\n"
    "k08,1000000.625,B,877,12345\n"
    "k06,53.0,A,1,8443\n"
    "k05,101.0,A,1460,8080\n"
    "k09,22.0,B,600,80\n"
    "k07,1.0,A,500,80\n";

struct ExpectedConn {
  const char* conn_id;
  std::uint64_t size;
  double duration;
  std::uint64_t packets;
  bool http;
};

// Hand computation for the fixture above (sorted by conn_id; k03/k04 dropped).
inline const std::vector<ExpectedConn>& ten_conn_oracle() {
  static const std::vector<ExpectedConn> oracle{
      {"k01", 1500, 2.5, 2, true},  {"k02", 600, 1.0, 3, false},
      {"k05", 4480, 1.0, 4, true},  {"k06", 1000, 3.0, 2, false},
      {"k07", 1000, 0.5, 3, true},  {"k08", 1000, 0.5, 2, false},
      {"k09", 1000, 2.0, 5, true},  {"k10", 6000, 1.25, 2, false},
  };
  return oracle;
}

// Segmentation fixture with hand-known dropped bytes at quiet threshold 0.5:
//   b1: ADUs of 300 and 110 bytes survive; the lone 999-byte packet at t=10
//       forms a single-packet ADU and is dropped.
//   b2: single-packet connection, dropped before segmentation.
//   b3: zero-duration connection, dropped before segmentation.
//   b4: direction flip yields two single-packet ADUs; all 90 bytes dropped.
inline const char* kConservationPackets =
    "b1,1.0,A,100,80\n"
    "b1,1.25,A,200,80\n"
    "b1,10.0,A,999,80\n"
    "b1,20.0,B,50,80\n"
    "b1,20.25,B,60,80\n"
    "b2,5.0,A,77,80\n"
    "b3,1.0,A,10,80\n"
    "b3,1.0,A,20,80\n"
    "b4,2.0,A,40,80\n"
    "b4,2.25,B,50,80\n";

struct ExpectedConservation {
  const char* conn_id;
  std::uint64_t conn_size;
  std::uint64_t adu_total;
  std::uint64_t dropped_bytes;
};

inline const std::vector<ExpectedConservation>& conservation_oracle() {
  static const std::vector<ExpectedConservation> oracle{
      {"b1", 1409, 410, 999},
      {"b4", 90, 0, 90},
  };
  return oracle;
}

}  // namespace fixtures

#endif
