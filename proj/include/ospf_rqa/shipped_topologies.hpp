#pragma once

// Generated from data/topologies/*.topo; a unit test checks they stay in sync.

#include <array>
#include <string_view>

namespace ospf_rqa::shipped {

struct ShippedTopology {
  std::string_view name;
  std::string_view text;
};

inline constexpr std::string_view k_paper16 = R"topo(# Approximation of the evaluation testbed: one OSPF area, abr1 at the core.
# r14 hangs off abr1.eth0 and r6.eth1, so taking both down cuts it off.
name paper16
area 0
router abr1 id=10.0.0.1
router r3 id=10.0.0.3
router r4 id=10.0.0.4
router r5 id=10.0.0.5
router r6 id=10.0.0.6
router r7 id=10.0.0.7
router r8 id=10.0.0.8
router r9 id=10.0.0.9
router r10 id=10.0.0.10
router r11 id=10.0.0.11
router r12 id=10.0.0.12
router r13 id=10.0.0.13
router r14 id=10.0.0.14
router r15 id=10.0.0.15
router r16 id=10.0.0.16
router rcs1 id=10.0.0.100
border abr1
host host2 attach=r10
link abr1.eth0 r14.eth0 delay=2-20
link r6.eth0 abr1.eth1 delay=2-20
link r6.eth1 r14.eth1 delay=2-20
link abr1.eth2 rcs1.eth0 delay=2-20
link abr1.eth3 r7.eth0 delay=2-20
link abr1.eth4 r9.eth0 delay=2-20
link abr1.eth5 r3.eth0 delay=2-20
link r3.eth1 r4.eth0 delay=2-20
link r4.eth1 r5.eth0 delay=2-20
link r5.eth1 r3.eth2 delay=2-20
link r7.eth1 r8.eth0 delay=2-20
link r7.eth2 r11.eth0 delay=2-20
link r8.eth1 r9.eth1 delay=2-20
link r8.eth2 r15.eth0 delay=2-20
link r9.eth2 r10.eth0 delay=2-20
link r10.eth1 r16.eth0 delay=2-20
link r11.eth1 r12.eth0 delay=2-20
link r12.eth1 r13.eth0 delay=2-20
link r13.eth1 r10.eth2 delay=2-20
link r15.eth1 r16.eth1 delay=2-20
monitor rcs1 attach=rcs1 stub
monitor r7 attach=r7 stub
monitor r11 attach=r11 stub
monitor r12 attach=r12 stub
monitor r13 attach=r13 stub
monitor r14 attach=r14 stub
monitor r15 attach=r15 stub
monitor r16 attach=r16 stub
)topo";

inline constexpr std::string_view k_topo20 = R"topo(# 20 routers, at most 4 peers per router
name topo20
router r1 id=10.1.0.1
router r2 id=10.1.0.2
router r3 id=10.1.0.3
router r4 id=10.1.0.4
router r5 id=10.1.0.5
router r6 id=10.1.0.6
router r7 id=10.1.0.7
router r8 id=10.1.0.8
router r9 id=10.1.0.9
router r10 id=10.1.0.10
router r11 id=10.1.0.11
router r12 id=10.1.0.12
router r13 id=10.1.0.13
router r14 id=10.1.0.14
router r15 id=10.1.0.15
router r16 id=10.1.0.16
router r17 id=10.1.0.17
router r18 id=10.1.0.18
router r19 id=10.1.0.19
router r20 id=10.1.0.20
link r1.eth0 r2.eth0 delay=2-20
link r1.eth1 r5.eth0 delay=2-20
link r1.eth2 r9.eth0 delay=2-20
link r2.eth1 r3.eth0 delay=2-20
link r2.eth2 r8.eth0 delay=2-20
link r3.eth1 r4.eth0 delay=2-20
link r3.eth2 r6.eth0 delay=2-20
link r3.eth3 r7.eth0 delay=2-20
link r4.eth1 r16.eth0 delay=2-20
link r5.eth1 r7.eth1 delay=2-20
link r6.eth1 r12.eth0 delay=2-20
link r7.eth2 r10.eth0 delay=2-20
link r7.eth3 r11.eth0 delay=2-20
link r8.eth1 r13.eth0 delay=2-20
link r8.eth2 r15.eth0 delay=2-20
link r9.eth1 r5.eth2 delay=2-20
link r9.eth2 r6.eth2 delay=2-20
link r10.eth1 r14.eth0 delay=2-20
link r10.eth2 r20.eth0 delay=2-20
link r11.eth1 r15.eth1 delay=2-20
link r11.eth2 r17.eth0 delay=2-20
link r11.eth3 r18.eth0 delay=2-20
link r14.eth1 r19.eth0 delay=2-20
link r16.eth1 r13.eth1 delay=2-20
link r17.eth1 r20.eth1 delay=2-20
link r18.eth1 r14.eth2 delay=2-20
link r19.eth1 r8.eth3 delay=2-20
link r20.eth2 r4.eth2 delay=2-20
monitor r12 attach=r12 stub
monitor r13 attach=r13 stub
monitor r15 attach=r15 stub
monitor r16 attach=r16 stub
monitor r17 attach=r17 stub
monitor r18 attach=r18 stub
)topo";

inline constexpr std::string_view k_topo35 = R"topo(# 35 routers, at most 6 peers per router
name topo35
router r1 id=10.2.0.1
router r2 id=10.2.0.2
router r3 id=10.2.0.3
router r4 id=10.2.0.4
router r5 id=10.2.0.5
router r6 id=10.2.0.6
router r7 id=10.2.0.7
router r8 id=10.2.0.8
router r9 id=10.2.0.9
router r10 id=10.2.0.10
router r11 id=10.2.0.11
router r12 id=10.2.0.12
router r13 id=10.2.0.13
router r14 id=10.2.0.14
router r15 id=10.2.0.15
router r16 id=10.2.0.16
router r17 id=10.2.0.17
router r18 id=10.2.0.18
router r19 id=10.2.0.19
router r20 id=10.2.0.20
router r21 id=10.2.0.21
router r22 id=10.2.0.22
router r23 id=10.2.0.23
router r24 id=10.2.0.24
router r25 id=10.2.0.25
router r26 id=10.2.0.26
router r27 id=10.2.0.27
router r28 id=10.2.0.28
router r29 id=10.2.0.29
router r30 id=10.2.0.30
router r31 id=10.2.0.31
router r32 id=10.2.0.32
router r33 id=10.2.0.33
router r34 id=10.2.0.34
router r35 id=10.2.0.35
link r1.eth0 r2.eth0 delay=2-20
link r1.eth1 r3.eth0 delay=2-20
link r1.eth2 r10.eth0 delay=2-20
link r1.eth3 r17.eth0 delay=2-20
link r1.eth4 r19.eth0 delay=2-20
link r1.eth5 r21.eth0 delay=2-20
link r2.eth1 r6.eth0 delay=2-20
link r2.eth2 r29.eth0 delay=2-20
link r3.eth1 r4.eth0 delay=2-20
link r3.eth2 r5.eth0 delay=2-20
link r3.eth3 r7.eth0 delay=2-20
link r3.eth4 r32.eth0 delay=2-20
link r4.eth1 r8.eth0 delay=2-20
link r4.eth2 r17.eth1 delay=2-20
link r4.eth3 r22.eth0 delay=2-20
link r5.eth1 r9.eth0 delay=2-20
link r5.eth2 r12.eth0 delay=2-20
link r5.eth3 r25.eth0 delay=2-20
link r5.eth4 r35.eth0 delay=2-20
link r6.eth1 r14.eth0 delay=2-20
link r6.eth2 r19.eth1 delay=2-20
link r8.eth1 r22.eth1 delay=2-20
link r8.eth2 r30.eth0 delay=2-20
link r9.eth1 r11.eth0 delay=2-20
link r9.eth2 r35.eth1 delay=2-20
link r11.eth1 r5.eth5 delay=2-20
link r11.eth2 r13.eth0 delay=2-20
link r11.eth3 r26.eth0 delay=2-20
link r11.eth4 r31.eth0 delay=2-20
link r11.eth5 r33.eth0 delay=2-20
link r12.eth1 r16.eth0 delay=2-20
link r12.eth2 r18.eth0 delay=2-20
link r12.eth3 r24.eth0 delay=2-20
link r13.eth1 r15.eth0 delay=2-20
link r15.eth1 r16.eth1 delay=2-20
link r16.eth2 r23.eth0 delay=2-20
link r16.eth3 r28.eth0 delay=2-20
link r17.eth2 r20.eth0 delay=2-20
link r17.eth3 r30.eth1 delay=2-20
link r21.eth1 r26.eth1 delay=2-20
link r22.eth2 r27.eth0 delay=2-20
link r22.eth3 r34.eth0 delay=2-20
link r24.eth1 r25.eth1 delay=2-20
link r25.eth2 r3.eth5 delay=2-20
link r26.eth2 r13.eth2 delay=2-20
link r29.eth1 r25.eth3 delay=2-20
link r29.eth2 r32.eth1 delay=2-20
link r31.eth1 r7.eth1 delay=2-20
link r31.eth2 r24.eth2 delay=2-20
monitor r7 attach=r7 stub
monitor r10 attach=r10 stub
monitor r14 attach=r14 stub
monitor r15 attach=r15 stub
monitor r18 attach=r18 stub
monitor r19 attach=r19 stub
monitor r20 attach=r20 stub
monitor r21 attach=r21 stub
)topo";

inline constexpr std::array<ShippedTopology, 3> kTopologies = {{
    {"paper16", k_paper16},
    {"topo20", k_topo20},
    {"topo35", k_topo35},
}};

}  // namespace ospf_rqa::shipped
