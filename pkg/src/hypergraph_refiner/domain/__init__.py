"""领域层：几何 oracle、匹配、解码与评分（纯 numpy，无 I/O）。"""
