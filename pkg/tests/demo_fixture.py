"""End-to-end fixture: five serial NFT rug pulls plus a legitimate control.

Topology: one exchange funds the first deployer; each deployer creates an
NFT contract whose mint proceeds are diverted straight back to the deployer
via internal transfers; deployers fund their successors (directly or through
one intermediary) and cash out through two shared exchange deposit
addresses, so deposit-reuse clustering ties all five together. The X account
homer_eth announces every contract. The control project keeps mint proceeds
in the contract, is announced by an unrelated account, and shares no funding
edges.

Run `python -m tests.demo_fixture <dir>` to materialize the files.
"""

from __future__ import annotations

import json
from datetime import datetime
from decimal import Decimal
from pathlib import Path

from tests.helpers import nft_bytecode, selector

ETH = 10**18


def _wei(value_eth) -> str:
    return str(int(Decimal(str(value_eth)) * ETH))

EXCHANGE = "0xffff000000000000000000000000000000000001"

D1 = "0xd100000000000000000000000000000000000001"
D2 = "0xd200000000000000000000000000000000000002"
D3 = "0xd300000000000000000000000000000000000003"
D4 = "0xc8a6000000000000000000000000000000000004"  # Ether Reapers deployer
D5 = "0xd500000000000000000000000000000000000005"
INTERMEDIARY = "0x1111000000000000000000000000000000000011"

M1 = "0xaa01000000000000000000000000000000000001"
M2 = "0xaa02000000000000000000000000000000000002"
M3 = "0xaa03000000000000000000000000000000000003"
BOB = "0xb0b0000000000000000000000000000000000b0b"

DEP1 = "0xdeb1000000000000000000000000000000000001"
DEP2 = "0xdeb2000000000000000000000000000000000002"

C1 = "0xca01000000000000000000000000000000000001"  # Ether Bananas
C2 = "0xca02000000000000000000000000000000000002"  # Ether Monkeys
C3 = "0xca03000000000000000000000000000000000003"  # Zombie Monkeys
C4 = "0xca04000000000000000000000000000000000004"  # Ether Reapers
C5 = "0xca05000000000000000000000000000000000005"  # ETH Banana Chips

LEGIT_DEPLOYER = "0x1d00000000000000000000000000000000000001"
LEGIT_CONTRACT = "0x1e91700000000000000000000000000000000001"  # Honest Apes

RUG_CONTRACTS = (C1, C2, C3, C4, C5)
RUG_DEPLOYERS = (D1, D2, D3, D4, D5)

MINT_SIGNATURES = {
    C1: "mintBanana()",
    C2: "mintMonkey()",
    C3: "mintZombie()",
    C4: "MintReaper()",
    C5: "mintChip()",
}
LEGIT_MINT_SIGNATURE = "mintApe()"

PROJECTS = (
    ("Ether Bananas", "2021-10-07", "125000", C1),
    ("Ether Monkeys", "2021-10-11", "1770000", C2),
    ("Zombie Monkeys", "2021-10-15", "413000", C3),
    ("Ether Reapers", "2021-10-20", "282000", C4),
    ("ETH Banana Chips", "2021-11-23", "208000", C5),
)

AUTHOR = "homer_eth"
CONTROL_AUTHOR = "jane_builds"


def _ts(day: str) -> int:
    return int(datetime.fromisoformat(day + "T00:00:00+00:00").timestamp())


def _tx(n: int, block: int, day: str, sender: str, to: str | None, value_eth, **kw) -> dict:
    obj = {
        "hash": "0x" + f"{n:064x}",
        "block_number": block,
        "timestamp": _ts(day),
        "from": sender,
        "to": to,
        "value_wei": _wei(value_eth),
        "input": kw.pop("input", "0x"),
    }
    if kw.get("created_contract"):
        obj["created_contract"] = kw.pop("created_contract")
    if kw.get("internal"):
        obj["internal_transfers"] = [
            {"from": s, "to": t, "value_wei": _wei(v)} for s, t, v in kw.pop("internal")
        ]
    assert not kw, kw
    return obj


def _mint_input(contract: str) -> str:
    signature = LEGIT_MINT_SIGNATURE if contract == LEGIT_CONTRACT else MINT_SIGNATURES[contract]
    return "0x" + selector(signature).hex()


def chain_transactions() -> list[dict]:
    txs = [
        _tx(1, 100, "2021-10-01", EXCHANGE, D1, 10),
        _tx(2, 105, "2021-10-05", EXCHANGE, LEGIT_DEPLOYER, 5),
        _tx(3, 110, "2021-10-07", D1, None, 0, created_contract=C1),
        _tx(4, 111, "2021-10-07", M1, C1, 1, input=_mint_input(C1), internal=[(C1, D1, 1)]),
        _tx(5, 112, "2021-10-07", M2, C1, 2, input=_mint_input(C1), internal=[(C1, D1, 2)]),
        _tx(6, 115, "2021-10-09", D1, D2, 2.5),
        _tx(7, 120, "2021-10-11", D2, None, 0, created_contract=C2),
        _tx(8, 121, "2021-10-11", M1, C2, 3, input=_mint_input(C2), internal=[(C2, D2, 3)]),
        _tx(9, 122, "2021-10-11", M3, C2, 1, input=_mint_input(C2), internal=[(C2, D2, 1)]),
        _tx(10, 125, "2021-10-13", D2, INTERMEDIARY, 2),
        _tx(11, 126, "2021-10-13", INTERMEDIARY, D3, 2),
        _tx(12, 130, "2021-10-15", D3, None, 0, created_contract=C3),
        _tx(13, 131, "2021-10-15", M2, C3, 2, input=_mint_input(C3), internal=[(C3, D3, 2)]),
        _tx(14, 135, "2021-10-18", D3, D4, 1.5),
        _tx(15, 140, "2021-10-20", D4, None, 0, created_contract=C4),
        _tx(16, 141, "2021-10-20", BOB, C4, 2.5, input=_mint_input(C4), internal=[(C4, D4, 2.5)]),
        _tx(17, 142, "2021-10-20", M1, C4, 0.5, input=_mint_input(C4), internal=[(C4, D4, 0.5)]),
        _tx(18, 150, "2021-11-20", D4, D5, 3),
        _tx(19, 160, "2021-11-23", D5, None, 0, created_contract=C5),
        _tx(20, 161, "2021-11-23", M1, C5, 1.5, input=_mint_input(C5), internal=[(C5, D5, 1.5)]),
        _tx(21, 162, "2021-11-23", M3, C5, 1, input=_mint_input(C5), internal=[(C5, D5, 1)]),
        # cash-outs through shared deposit addresses
        _tx(22, 170, "2021-11-24", D1, DEP1, 0.5),
        _tx(23, 171, "2021-11-24", D2, DEP1, 2),
        _tx(24, 172, "2021-11-24", D3, DEP1, 0.5),
        _tx(25, 173, "2021-11-24", DEP1, EXCHANGE, 3),
        _tx(26, 174, "2021-11-24", D3, DEP2, 0.5),
        _tx(27, 175, "2021-11-24", D4, DEP2, 1.5),
        _tx(28, 176, "2021-11-24", D5, DEP2, 2.5),
        _tx(29, 177, "2021-11-24", DEP2, EXCHANGE, 4.5),
        # the control project: proceeds stay in the contract
        _tx(30, 180, "2021-11-25", LEGIT_DEPLOYER, None, 0, created_contract=LEGIT_CONTRACT),
        _tx(31, 181, "2021-11-25", M2, LEGIT_CONTRACT, 1, input=_mint_input(LEGIT_CONTRACT)),
        _tx(32, 182, "2021-11-25", M3, LEGIT_CONTRACT, 1, input=_mint_input(LEGIT_CONTRACT)),
    ]
    return txs


def social_posts() -> list[dict]:
    def post(pid, author, day, hour, text):
        return {
            "id": pid,
            "author_username": author,
            "created_at": f"{day}T{hour:02d}:00:00Z",
            "text": text,
        }

    return [
        post("p1", AUTHOR, "2021-10-07", 12, f"Ether Bananas mint is LIVE! Grab yours at {C1}"),
        post("p2", AUTHOR, "2021-10-11", 12, f"Ether Monkeys launch today, mintMonkey at {C2}"),
        post("p3", AUTHOR, "2021-10-15", 12, f"Zombie Monkeys drop now live {C3}"),
        post("p4", AUTHOR, "2021-10-20", 12, f"Ether Reapers minting open {C4}"),
        post("p5", AUTHOR, "2021-10-21", 9, "thanks @bob_collects for minting an Ether Reaper!"),
        post("p6", AUTHOR, "2021-11-23", 12, f"ETH Banana Chips mint live now {C5}"),
        post("p7", CONTROL_AUTHOR, "2021-11-25", 12, f"Honest Apes mint is live at {LEGIT_CONTRACT}, funds locked"),
    ]


def attributions() -> list[dict]:
    return [
        {"address": EXCHANGE, "label": "MegaExchange", "tag": "exchange", "provenance": "analyst import 2021-12"},
        {"address": DEP1, "label": "MegaExchange deposit", "tag": "deposit_address", "provenance": "heuristic export"},
        {"address": BOB, "label": "Bob", "tag": "known_entity", "provenance": "user report"},
    ]


def enrichment() -> dict:
    return {
        AUTHOR: {
            "name": "Homer",
            "description": "Serial NFT founder",
            "affiliations": [
                {"name": name, "launch_date": day, "estimated_profit_usd": profit}
                for name, day, profit, _ in PROJECTS
            ],
            "links": ["https://x.example/homer_eth"],
        },
        CONTROL_AUTHOR: {
            "name": "Jane",
            "description": "Smart contract engineer",
            "affiliations": [],
            "links": [],
        },
    }


def contracts() -> dict:
    registry = {}
    for contract, signature in MINT_SIGNATURES.items():
        block = {C1: 110, C2: 120, C3: 130, C4: 140, C5: 160}[contract]
        registry[contract] = {
            "bytecode": "0x" + nft_bytecode(signature).hex(),
            "deployed_block": block,
        }
    registry[LEGIT_CONTRACT] = {
        "bytecode": "0x" + nft_bytecode(LEGIT_MINT_SIGNATURE).hex(),
        "deployed_block": 180,
    }
    return registry


def provider_abis() -> dict:
    """The control contract's ABI is served by the provider, names included."""
    return {
        LEGIT_CONTRACT: [
            {
                "type": "function",
                "name": "mintApe",
                "stateMutability": "payable",
                "inputs": [],
                "outputs": [],
            },
            {
                "type": "function",
                "name": "totalSupply",
                "stateMutability": "view",
                "inputs": [],
                "outputs": [{"name": "", "type": "uint256"}],
            },
        ]
    }


def signature_lines() -> list[str]:
    signatures = sorted(
        set(MINT_SIGNATURES.values())
        | {
            LEGIT_MINT_SIGNATURE,
            "totalSupply()",
            "transfer(address,uint256)",
            "mint()",
            "deposit()",
            "store(uint256)",
            "retrieve()",
            "calc()",
        }
    )
    return [f"{selector(s).hex()} {s}" for s in signatures]


def project_names() -> list[str]:
    return [name for name, _, _, _ in PROJECTS] + ["Honest Apes"]


def build(directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "chain.jsonl").write_text(
        "".join(json.dumps(tx) + "\n" for tx in chain_transactions()), encoding="utf-8"
    )
    (directory / "posts.jsonl").write_text(
        "".join(json.dumps(p) + "\n" for p in social_posts()), encoding="utf-8"
    )
    (directory / "attributions.jsonl").write_text(
        "".join(json.dumps(a) + "\n" for a in attributions()), encoding="utf-8"
    )
    (directory / "enrichment.json").write_text(json.dumps(enrichment(), indent=2), encoding="utf-8")
    (directory / "contracts.json").write_text(json.dumps(contracts(), indent=2), encoding="utf-8")
    (directory / "abis.json").write_text(json.dumps(provider_abis(), indent=2), encoding="utf-8")
    (directory / "signatures.txt").write_text("\n".join(signature_lines()) + "\n", encoding="utf-8")
    (directory / "project_names.txt").write_text("\n".join(project_names()) + "\n", encoding="utf-8")
    return directory


if __name__ == "__main__":
    import sys

    target = sys.argv[1] if len(sys.argv) > 1 else "fixtures/demo"
    print(f"wrote {build(target)}")
