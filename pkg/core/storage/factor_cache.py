"""
分解缓存 - 可选的 sqlite 持久化，避免批量报告重复分解大数
"""

import json
import logging
import sqlite3
from datetime import datetime
from typing import Optional

from core.arith.numth import Factorization, factorize
from core.engine.constants import LogMessages

logger = logging.getLogger(__name__)


class FactorCache:
    """按 n 缓存素因子分解，读出后重新相乘校验"""

    def __init__(self, db_path: str, timeout: float = 30):
        self.db_path = db_path
        self.timeout = timeout
        self._init_database()

    def _connect(self) -> sqlite3.Connection:
        return sqlite3.connect(self.db_path, timeout=self.timeout)

    def _init_database(self):
        """初始化数据库表结构"""
        conn = self._connect()
        cursor = conn.cursor()
        cursor.execute("""
            CREATE TABLE IF NOT EXISTS factorization (
                n TEXT PRIMARY KEY,
                factors TEXT NOT NULL,
                created_at TEXT NOT NULL
            )
        """)
        conn.commit()
        conn.close()

    def get(self, n: int) -> Optional[Factorization]:
        conn = self._connect()
        try:
            row = conn.execute("SELECT factors FROM factorization WHERE n = ?", (str(n),)).fetchone()
        finally:
            conn.close()
        if row is None:
            return None

        factors = tuple((int(p), int(k)) for p, k in json.loads(row[0]))
        result = Factorization(
            n=n,
            factors=factors,
            squarefree=all(k == 1 for _, k in factors),
            residues_mod8=tuple((p, p % 8) for p, _ in factors),
        )
        # 损坏的条目直接丢弃
        if result.recompose() != n:
            self.delete(n)
            return None
        logger.debug(LogMessages.FACTOR_CACHE_HIT.format(n))
        return result

    def put(self, fact: Factorization):
        payload = json.dumps([[str(p), k] for p, k in fact.factors])
        conn = self._connect()
        try:
            conn.execute(
                "INSERT OR REPLACE INTO factorization (n, factors, created_at) VALUES (?, ?, ?)",
                (str(fact.n), payload, datetime.now().isoformat()),
            )
            conn.commit()
        finally:
            conn.close()

    def delete(self, n: int):
        conn = self._connect()
        try:
            conn.execute("DELETE FROM factorization WHERE n = ?", (str(n),))
            conn.commit()
        finally:
            conn.close()

    def factorize(self, n: int) -> Factorization:
        cached = self.get(n)
        if cached is not None:
            return cached
        fact = factorize(n)
        self.put(fact)
        return fact

    def count(self) -> int:
        conn = self._connect()
        try:
            return conn.execute("SELECT COUNT(*) FROM factorization").fetchone()[0]
        finally:
            conn.close()
